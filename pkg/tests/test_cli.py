import pytest

from costadapt.cli import main, parse_schedule, parse_synth_spec
from costadapt.cli import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE
from costadapt.core import CostSchedule
from costadapt.errors import NumericError


SYNTH = "pos=20,neg=60,dim=2,sep=3.0,noise=1.0,seed=7"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestArgParsing:
    def test_schedule_parsing(self):
        assert parse_schedule("5:1") == CostSchedule(5, 1)
        assert parse_schedule("2.5:0.5") == CostSchedule(2.5, 0.5)

    def test_bad_schedule_is_usage_error(self, capsys):
        code, _, err = run(
            ["train-base", "--synth-spec", SYNTH, "--schedule", "abc", "--out", "m"],
            capsys,
        )
        assert code == EXIT_USAGE
        assert "POS:NEG" in err

    def test_synth_spec_parsing(self):
        spec = parse_synth_spec("pos=1,neg=2,dim=3,sep=4,noise=0.5,seed=6")
        assert (spec.n_positive, spec.n_negative, spec.dimension) == (1, 2, 3)
        assert (spec.mean_separation, spec.noise_scale, spec.seed) == (4.0, 0.5, 6)

    def test_unknown_subcommand_is_usage_error(self, capsys):
        code, _, _ = run(["frobnicate"], capsys)
        assert code == EXIT_USAGE

    def test_missing_data_source_is_usage_error(self, capsys, tmp_path):
        code, _, err = run(
            ["train-base", "--schedule", "2:1", "--out", str(tmp_path / "m")], capsys
        )
        assert code == EXIT_USAGE
        assert "--data" in err


class TestTrainBase:
    def test_writes_model_deterministically(self, capsys, tmp_path):
        model = tmp_path / "base.model"
        argv = [
            "train-base", "--synth-spec", SYNTH, "--schedule", "2:1",
            "--alpha", "1.0", "--seed", "0", "--out", str(model),
        ]
        code, out, _ = run(argv, capsys)
        assert code == EXIT_OK
        assert "METRIC steps=80" in out
        first = model.read_bytes()
        code, _, _ = run(argv, capsys)
        assert code == EXIT_OK
        assert model.read_bytes() == first

    def test_missing_input_leaves_no_output(self, capsys, tmp_path):
        model = tmp_path / "never.model"
        code, _, err = run(
            ["train-base", "--data", str(tmp_path / "absent.libsvm"),
             "--schedule", "2:1", "--out", str(model)],
            capsys,
        )
        assert code == EXIT_DATA
        assert not model.exists()


class TestAdaptEvalFlow:
    @pytest.fixture()
    def base_model(self, tmp_path, capsys):
        model = tmp_path / "base.model"
        code, _, _ = run(
            ["train-base", "--synth-spec", SYNTH, "--schedule", "2:1",
             "--seed", "0", "--out", str(model)],
            capsys,
        )
        assert code == EXIT_OK
        return model

    def test_adapt_empty_stream_keeps_base(self, base_model, tmp_path, capsys):
        adapted = tmp_path / "adapted.model"
        code, _, _ = run(
            ["adapt", "--model", str(base_model),
             "--synth-spec", "pos=0,neg=0,dim=2,sep=1,noise=1,seed=0",
             "--schedule", "5:1", "--out", str(adapted)],
            capsys,
        )
        assert code == EXIT_OK
        text = adapted.read_text()
        assert "adaptation_weights 0 0" in text

    def test_adapt_improves_cost_on_training_stream(self, base_model, tmp_path, capsys):
        # separable stream: adaptation can close every margin violation
        stream = "pos=30,neg=120,dim=2,sep=6.0,noise=0.5,seed=11"
        adapted = tmp_path / "adapted.model"
        code, _, _ = run(
            ["adapt", "--model", str(base_model), "--synth-spec", stream,
             "--schedule", "5:1", "--seed", "1", "--out", str(adapted)],
            capsys,
        )
        assert code == EXIT_OK

        def avg_cost(model_path):
            code, out, _ = run(
                ["eval", "--model", str(model_path), "--synth-spec", stream,
                 "--schedule", "5:1"],
                capsys,
            )
            assert code == EXIT_OK
            line = next(l for l in out.splitlines() if l.startswith("METRIC avg_cost="))
            return float(line.split("=")[1])

        assert avg_cost(adapted) <= avg_cost(base_model)

    def test_eval_prints_hand_counted_metrics(self, tmp_path, capsys):
        # model: fixed weights (1, 0); four samples, one positive misclassified
        data = tmp_path / "four.csv"
        data.write_text("1,1.0,0.0\n1,-1.0,0.0\n-1,-1.0,0.0\n-1,-2.0,0.0\n")
        model = tmp_path / "unit.model"
        model.write_text(
            "costadapt-model 1\n"
            "dimension 2\n"
            "base_kind zero\n"
            "adaptation_weights 1 0\n"
            "cost_positive 5\n"
            "cost_negative 1\n"
            "alpha 1\n"
            "updates_applied 0\n"
        )
        code, out, _ = run(
            ["eval", "--model", str(model), "--data", str(data),
             "--schedule", "5:1"],
            capsys,
        )
        assert code == EXIT_OK
        assert "METRIC accuracy=0.75" in out
        assert "METRIC avg_cost=1.25" in out

    def test_dimension_mismatch_names_both(self, base_model, tmp_path, capsys):
        code, _, err = run(
            ["adapt", "--model", str(base_model),
             "--synth-spec", "pos=5,neg=5,dim=3,sep=2,noise=1,seed=1",
             "--schedule", "5:1", "--out", str(tmp_path / "x.model")],
            capsys,
        )
        assert code == EXIT_DATA
        assert "2" in err and "3" in err

    def test_eval_schedule_8_to_1(self, base_model, capsys):
        code, out, _ = run(
            ["eval", "--model", str(base_model), "--synth-spec", SYNTH,
             "--schedule", "8:1"],
            capsys,
        )
        assert code == EXIT_OK
        assert "METRIC avg_cost=" in out


class TestBench:
    def write_config(self, tmp_path, csv_name="out.csv"):
        cfg = tmp_path / "bench.cfg"
        cfg.write_text(
            "[dataset]\n"
            "kind = synthetic\n"
            "n_positive = 30\n"
            "n_negative = 70\n"
            "dimension = 2\n"
            "mean_separation = 2.5\n"
            "noise_scale = 1.0\n"
            "seed = 3\n"
            "[costs]\n"
            "old_positive = 2\n"
            "old_negative = 1\n"
            "new_positive = 5\n"
            "new_negative = 1\n"
            "[protocol]\n"
            "alpha_grid = 0.1 1\n"
            "seed = 12\n"
            f"[output]\ncsv = {tmp_path / csv_name}\n"
        )
        return cfg

    def test_bench_writes_byte_identical_csv(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        code, out, _ = run(["bench", "--config", str(cfg)], capsys)
        assert code == EXIT_OK
        assert "method" in out
        first = (tmp_path / "out.csv").read_bytes()
        code, _, _ = run(["bench", "--config", str(cfg)], capsys)
        assert code == EXIT_OK
        assert (tmp_path / "out.csv").read_bytes() == first

    def test_unknown_config_keys_listed(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[dataset]\nkind = synthetic\nwhat = 4\n[extra]\nx = 1\n")
        code, _, err = run(["bench", "--config", str(cfg)], capsys)
        assert code == EXIT_DATA
        assert "dataset.what" in err
        assert "extra" in err

    def test_out_flag_overrides_config(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        override = tmp_path / "other.csv"
        code, _, _ = run(
            ["bench", "--config", str(cfg), "--out", str(override)], capsys
        )
        assert code == EXIT_OK
        assert override.exists()


class TestErrorMapping:
    def test_numeric_error_exit_code(self, capsys, monkeypatch):
        from costadapt.service import handlers

        def explode(req):
            raise NumericError("boom")

        monkeypatch.setattr(handlers, "train_base", explode)
        code, _, err = run(
            ["train-base", "--synth-spec", SYNTH, "--schedule", "2:1", "--out", "m"],
            capsys,
        )
        assert code == EXIT_NUMERIC
        assert "boom" in err

    def test_nonpositive_alpha_is_usage_error(self, capsys, tmp_path):
        code, _, _ = run(
            ["train-base", "--synth-spec", SYNTH, "--schedule", "2:1",
             "--alpha", "-1", "--out", str(tmp_path / "m")],
            capsys,
        )
        assert code == EXIT_USAGE
