"""Loading, saving and describing survival dataset files.

Files are delimiter-separated text with a header row, '.' decimals and the
missing-value tokens "" and "NA".  Text-valued covariate columns are mapped
to integer codes in order of first appearance; the mapping travels with the
dataset so reports can document it.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DatasetLoadError, InvalidInputError
from .survsim import SurvivalDataset

__all__ = ["DatasetSpec", "load_dataset", "save_dataset", "bundled_dataset_spec", "BUNDLED_DATASETS"]

_MISSING_TOKENS = ("", "NA")
_DELIMITERS = (",", "\t", ";")


@dataclass(frozen=True)
class DatasetSpec:
    """Instructions for reading one survival dataset file.

    covariate_cols defaults to every remaining numeric column.  Rows with a
    missing value in any used column are dropped; ``na_screen_cols`` extends
    that screen to columns that are not part of the model (used by the
    bundled cancer data to reproduce whole-table complete-case filtering).
    """

    path: str
    time_col: str = "time"
    status_col: str = "status"
    covariate_cols: tuple = None
    na_policy: str = "drop_rows"
    status_event_value: object = 1
    na_screen_cols: tuple = ()

    def __post_init__(self):
        if self.time_col == self.status_col:
            raise InvalidInputError("time_col and status_col must differ")
        if self.covariate_cols is not None:
            cov = tuple(self.covariate_cols)
            if self.time_col in cov or self.status_col in cov:
                raise InvalidInputError("time/status columns cannot be covariates")
            object.__setattr__(self, "covariate_cols", cov)
        object.__setattr__(self, "na_screen_cols", tuple(self.na_screen_cols))
        if self.na_policy != "drop_rows":
            raise InvalidInputError(f"unsupported na_policy {self.na_policy!r}")

    def to_dict(self) -> dict:
        return {
            "path": str(self.path),
            "time_col": self.time_col,
            "status_col": self.status_col,
            "covariate_cols": list(self.covariate_cols) if self.covariate_cols else None,
            "na_policy": self.na_policy,
            "status_event_value": self.status_event_value,
            "na_screen_cols": list(self.na_screen_cols),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetSpec":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise InvalidInputError(f"unknown DatasetSpec fields: {sorted(extra)}")
        return cls(**d)


# Column layouts for the two bundled benchmark datasets.  The lung-cancer
# table keeps its administrative 'inst' column out of the covariates but in
# the missing-value screen, matching the published 167 complete rows; its
# status coding is 1=censored, 2=dead.
BUNDLED_DATASETS = {
    "cancer": dict(
        time_col="time",
        status_col="status",
        covariate_cols=("age", "sex", "ph.ecog", "ph.karno", "pat.karno", "meal.cal", "wt.loss"),
        status_event_value=2,
        na_screen_cols=("inst",),
    ),
    "veteran": dict(
        time_col="time",
        status_col="status",
        covariate_cols=("trt", "celltype", "karno", "diagtime", "age", "prior"),
        status_event_value=1,
    ),
}


def bundled_dataset_spec(name: str) -> DatasetSpec:
    """DatasetSpec for one of the packaged benchmark tables."""
    if name not in BUNDLED_DATASETS:
        raise InvalidInputError(f"unknown bundled dataset {name!r}; have {sorted(BUNDLED_DATASETS)}")
    path = resources.files("cesurv").joinpath(f"data/{name}.csv")
    return DatasetSpec(path=str(path), **BUNDLED_DATASETS[name])


def _parse_float(token: str):
    try:
        return float(token)
    except ValueError:
        return None


def _read_table(path) -> tuple:
    p = Path(path)
    if not p.is_file():
        raise DatasetLoadError(f"dataset file not found: {p}")
    text = p.read_text(encoding="utf-8")
    header_line = text.splitlines()[0] if text else ""
    delim = max(_DELIMITERS, key=header_line.count)
    if header_line.count(delim) == 0:
        raise DatasetLoadError(f"{p}: could not find a delimiter in the header row")
    reader = csv.reader(text.splitlines(), delimiter=delim)
    rows = list(reader)
    header = rows[0]
    if len(set(header)) != len(header):
        raise DatasetLoadError(f"{p}: duplicate column names in header")
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DatasetLoadError(f"{p}: line {lineno} has {len(row)} fields, expected {len(header)}")
        body.append((lineno, [t.strip() for t in row]))
    return header, body


def load_dataset(spec: DatasetSpec) -> SurvivalDataset:
    """Read a dataset file into a SurvivalDataset.

    Rows with missing values in used (or screened) columns are dropped.
    Text covariates become integer codes by first appearance; the mapping,
    drop count and file hash are recorded in ``dataset.attrs``.
    """
    header, body = _read_table(spec.path)
    col_of = {name: i for i, name in enumerate(header)}
    for col in (spec.time_col, spec.status_col, *(spec.covariate_cols or ()), *spec.na_screen_cols):
        if col not in col_of:
            raise DatasetLoadError(f"{spec.path}: required column {col!r} not in header {header}")

    if spec.covariate_cols is None:
        # Default: every remaining column whose non-missing values all parse
        # as numbers.
        rest = [c for c in header if c not in (spec.time_col, spec.status_col)]
        covariates = tuple(
            c for c in rest
            if all(_parse_float(r[col_of[c]]) is not None
                   for _, r in body if r[col_of[c]] not in _MISSING_TOKENS)
        )
    else:
        covariates = spec.covariate_cols

    screen = [spec.time_col, spec.status_col, *covariates, *spec.na_screen_cols]
    kept = [
        (lineno, row) for lineno, row in body
        if all(row[col_of[c]] not in _MISSING_TOKENS for c in screen)
    ]
    n_dropped = len(body) - len(kept)
    if not kept:
        raise DatasetLoadError(f"{spec.path}: no rows left after dropping missing values")

    def numeric_column(col):
        out = np.empty(len(kept))
        for i, (lineno, row) in enumerate(kept):
            v = _parse_float(row[col_of[col]])
            if v is None:
                raise DatasetLoadError(
                    f"{spec.path}: line {lineno}, column {col!r}: "
                    f"cannot parse {row[col_of[col]]!r} as a number"
                )
            out[i] = v
        return out

    time = numeric_column(spec.time_col)
    bad = np.nonzero(time <= 0)[0]
    if bad.size:
        lineno = kept[bad[0]][0]
        raise DatasetLoadError(
            f"{spec.path}: line {lineno}, column {spec.time_col!r}: time must be positive"
        )

    event_num = _parse_float(str(spec.status_event_value))
    status = np.empty(len(kept), dtype=int)
    for i, (_, row) in enumerate(kept):
        tok = row[col_of[spec.status_col]]
        num = _parse_float(tok)
        if num is not None and event_num is not None:
            status[i] = 1 if num == event_num else 0
        else:
            status[i] = 1 if tok == str(spec.status_event_value) else 0

    matrix = np.empty((len(kept), len(covariates)))
    categorical_maps = {}
    for j, col in enumerate(covariates):
        tokens = [row[col_of[col]] for _, row in kept]
        if all(_parse_float(t) is not None for t in tokens):
            matrix[:, j] = numeric_column(col)
        else:
            codes = {}
            for t in tokens:
                if t not in codes:
                    codes[t] = len(codes) + 1
            matrix[:, j] = [codes[t] for t in tokens]
            categorical_maps[col] = codes

    sha = hashlib.sha256(Path(spec.path).read_bytes()).hexdigest()
    attrs = {
        "source_path": str(spec.path),
        "source_sha256": sha,
        "n_raw_rows": len(body),
        "n_dropped_rows": n_dropped,
        "categorical_maps": categorical_maps,
        "status_event_value": spec.status_event_value,
    }
    return SurvivalDataset(matrix, time, status, list(covariates), attrs=attrs)


def save_dataset(ds: SurvivalDataset, path, delimiter: str = ",") -> None:
    """Write a dataset as delimited text that round-trips through load."""
    def fmt(v: float) -> str:
        return str(int(v)) if float(v).is_integer() else repr(float(v))

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow([*ds.names, "time", "status"])
        for i in range(ds.n_rows):
            writer.writerow(
                [fmt(v) for v in ds.covariates[i]] + [fmt(ds.time[i]), str(int(ds.status[i]))]
            )
