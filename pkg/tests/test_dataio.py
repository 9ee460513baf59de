import numpy as np
import pytest

from cesurv.dataio import DatasetSpec, bundled_dataset_spec, load_dataset, save_dataset
from cesurv.errors import DatasetLoadError, InvalidInputError


class TestBundledData:
    def test_cancer_complete_cases(self):
        ds = load_dataset(bundled_dataset_spec("cancer"))
        assert ds.attrs["n_raw_rows"] == 228
        assert ds.n_rows == 167
        assert ds.attrs["n_dropped_rows"] == 61
        assert ds.names == ["age", "sex", "ph.ecog", "ph.karno", "pat.karno", "meal.cal", "wt.loss"]
        assert ds.n_events == 120  # status==2 mapped to event among complete rows

    def test_veteran_loads_fully(self):
        ds = load_dataset(bundled_dataset_spec("veteran"))
        assert ds.n_rows == 137 and ds.attrs["n_dropped_rows"] == 0
        assert ds.n_events == 128
        assert ds.attrs["categorical_maps"]["celltype"] == {
            "squamous": 1, "smallcell": 2, "adeno": 3, "large": 4
        }
        assert ds.names == ["trt", "celltype", "karno", "diagtime", "age", "prior"]

    def test_unknown_bundle_rejected(self):
        with pytest.raises(InvalidInputError):
            bundled_dataset_spec("titanic")


class TestLoadDataset:
    def write(self, tmp_path, text, name="data.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p

    def test_default_covariates_are_remaining_numeric(self, tmp_path):
        p = self.write(tmp_path, "time,status,a,b,note\n1,1,0.5,2,hi\n2,0,1.5,3,lo\n")
        ds = load_dataset(DatasetSpec(path=p))
        assert ds.names == ["a", "b"]  # free-text column left out by default

    def test_explicit_text_covariate_coded_by_first_appearance(self, tmp_path):
        p = self.write(tmp_path, "time,status,grp\n1,1,low\n2,0,high\n3,1,low\n")
        ds = load_dataset(DatasetSpec(path=p, covariate_cols=("grp",)))
        np.testing.assert_array_equal(ds.covariates[:, 0], [1.0, 2.0, 1.0])
        assert ds.attrs["categorical_maps"]["grp"] == {"low": 1, "high": 2}

    def test_missing_tokens_dropped(self, tmp_path):
        p = self.write(tmp_path, "time,status,a\n1,1,0.5\n2,0,NA\n3,1,\n4,1,2.5\n")
        ds = load_dataset(DatasetSpec(path=p))
        assert ds.n_rows == 2 and ds.attrs["n_dropped_rows"] == 2

    def test_na_screen_columns_extend_the_drop(self, tmp_path):
        p = self.write(tmp_path, "time,status,a,extra\n1,1,0.5,NA\n2,0,1.5,7\n")
        ds = load_dataset(DatasetSpec(path=p, covariate_cols=("a",), na_screen_cols=("extra",)))
        assert ds.n_rows == 1

    def test_one_row_file_is_valid(self, tmp_path):
        p = self.write(tmp_path, "time,status,a\n5,1,1.0\n")
        ds = load_dataset(DatasetSpec(path=p))
        assert ds.n_rows == 1

    def test_status_event_value_mapping(self, tmp_path):
        p = self.write(tmp_path, "time,status,a\n1,2,0.5\n2,1,1.5\n")
        ds = load_dataset(DatasetSpec(path=p, status_event_value=2))
        np.testing.assert_array_equal(ds.status, [1, 0])

    def test_string_status_values(self, tmp_path):
        p = self.write(tmp_path, "time,status,a\n1,dead,0.5\n2,alive,1.5\n")
        ds = load_dataset(DatasetSpec(path=p, status_event_value="dead"))
        np.testing.assert_array_equal(ds.status, [1, 0])

    def test_missing_column_error(self, tmp_path):
        p = self.write(tmp_path, "time,flag,a\n1,1,0.5\n")
        with pytest.raises(DatasetLoadError, match="status"):
            load_dataset(DatasetSpec(path=p))

    def test_nonpositive_time_names_line(self, tmp_path):
        p = self.write(tmp_path, "time,status,a\n1,1,0.5\n0,1,1.5\n")
        with pytest.raises(DatasetLoadError, match="line 3"):
            load_dataset(DatasetSpec(path=p))

    def test_unparseable_time_names_line_and_column(self, tmp_path):
        p = self.write(tmp_path, "time,status,a\n1,1,0.5\noops,1,1.5\n")
        with pytest.raises(DatasetLoadError, match="line 3.*time"):
            load_dataset(DatasetSpec(path=p))

    def test_unparseable_explicit_numeric_covariate(self, tmp_path):
        # a covariate listed explicitly may still be categorical text, but the
        # time/status columns must be numeric
        p = self.write(tmp_path, "time,status,a\nx,1,0.5\n")
        with pytest.raises(DatasetLoadError):
            load_dataset(DatasetSpec(path=p))

    def test_tab_delimited(self, tmp_path):
        p = self.write(tmp_path, "time\tstatus\ta\n1\t1\t0.5\n2\t0\t1.5\n")
        ds = load_dataset(DatasetSpec(path=p))
        assert ds.n_rows == 2 and ds.names == ["a"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetLoadError):
            load_dataset(DatasetSpec(path=tmp_path / "nope.csv"))

    def test_spec_validation(self):
        with pytest.raises(InvalidInputError):
            DatasetSpec(path="x.csv", time_col="t", status_col="t")
        with pytest.raises(InvalidInputError):
            DatasetSpec(path="x.csv", covariate_cols=("time",))
        with pytest.raises(InvalidInputError):
            DatasetSpec(path="x.csv", na_policy="impute")


class TestRoundTrip:
    def test_save_load_identical(self, tmp_path):
        ds = load_dataset(bundled_dataset_spec("cancer"))
        out = tmp_path / "rt.csv"
        save_dataset(ds, out)
        back = load_dataset(DatasetSpec(path=out))
        np.testing.assert_array_equal(back.covariates, ds.covariates)
        np.testing.assert_array_equal(back.time, ds.time)
        np.testing.assert_array_equal(back.status, ds.status)
        assert back.names == ds.names

    def test_fractional_values_survive(self, tmp_path):
        from cesurv.survsim import SurvivalDataset

        rng = np.random.default_rng(3)
        ds = SurvivalDataset(rng.standard_normal((20, 2)), rng.random(20) + 0.25,
                             rng.integers(0, 2, 20), ["u", "v"])
        out = tmp_path / "rt.csv"
        save_dataset(ds, out)
        back = load_dataset(DatasetSpec(path=out))
        np.testing.assert_array_equal(back.covariates, ds.covariates)
        np.testing.assert_array_equal(back.time, ds.time)
