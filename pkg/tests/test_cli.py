import json
import socket
import subprocess
import sys
import time
import urllib.request

import pytest

from wrongsmith import corpus, toylang
from wrongsmith.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Small toy-language workspace with a trained corruptor model."""
    root = tmp_path_factory.mktemp("cli")
    pairs = toylang.make_parallel(40, seed=5)
    corpus.write_parallel_tsv(pairs[:32], root / "train.tsv")
    corpus.write_parallel_tsv(pairs[32:], root / "dev.tsv")
    corpus.write_sentences(toylang.make_clean(6, seed=6), root / "clean.txt")
    corpus.write_labeled(toylang.make_labeled(12, seed=7), root / "real.labeled")
    corpus.write_labeled(toylang.make_labeled(8, seed=8), root / "dev.labeled")
    corpus.write_labeled(toylang.make_labeled(8, seed=9), root / "test.labeled")
    code = main(
        [
            "corruptor", "train",
            "--parallel", str(root / "train.tsv"),
            "--dev", str(root / "dev.tsv"),
            "--out", str(root / "model.wsm"),
            "--cell-size", "12", "--emb-size", "8",
            "--max-epochs", "40", "--patience", "30", "--seed", "1",
        ]
    )
    assert code == 0
    return root


def _train_args(root, out, seed="1"):
    return [
        "corruptor", "train",
        "--parallel", str(root / "train.tsv"),
        "--dev", str(root / "dev.tsv"),
        "--out", str(out),
        "--cell-size", "12", "--emb-size", "8",
        "--max-epochs", "4", "--patience", "10", "--seed", seed,
    ]


class TestCorruptorTrain:
    def test_prints_per_epoch_dev_scores(self, workspace, tmp_path, capsys):
        assert main(_train_args(workspace, tmp_path / "m.wsm")) == 0
        out = capsys.readouterr().out
        assert out.count("dev_loss") == 4

    def test_missing_file_exit_2(self, tmp_path, capsys):
        code = main(
            [
                "corruptor", "train",
                "--parallel", str(tmp_path / "nope.tsv"),
                "--dev", str(tmp_path / "nope.tsv"),
                "--out", str(tmp_path / "m.wsm"),
            ]
        )
        assert code == 2

    def test_patience_zero_exit_2(self, workspace, tmp_path):
        args = _train_args(workspace, tmp_path / "m.wsm")
        args[args.index("--patience") + 1] = "0"
        assert main(args) == 2

    def test_rerun_byte_identical(self, workspace, tmp_path):
        main(_train_args(workspace, tmp_path / "a.wsm"))
        main(_train_args(workspace, tmp_path / "b.wsm"))
        assert (tmp_path / "a.wsm").read_bytes() == (tmp_path / "b.wsm").read_bytes()


class TestCorruptorGenerate:
    def _gen(self, workspace, out, strategy, extra=()):
        return main(
            [
                "corruptor", "generate",
                "--model", str(workspace / "model.wsm"),
                "--input", str(workspace / "clean.txt"),
                "--strategy", strategy,
                "--samples", "3",
                "--seed", "11",
                "--out", str(out),
                *extra,
            ]
        )

    def test_each_strategy_writes_pairs_and_sidecar(self, workspace, tmp_path):
        for strategy in ("am", "ts", "bs"):
            out = tmp_path / f"{strategy}.tsv"
            assert self._gen(workspace, out, strategy) == 0
            pairs = corpus.read_parallel_tsv(out)
            assert pairs
            sidecar = (out.parent / (out.name + ".scores.tsv")).read_text()
            assert len(sidecar.splitlines()) == len(pairs)

    def test_same_seed_identical_file(self, workspace, tmp_path):
        self._gen(workspace, tmp_path / "one.tsv", "ts")
        self._gen(workspace, tmp_path / "two.tsv", "ts")
        assert (tmp_path / "one.tsv").read_bytes() == (tmp_path / "two.tsv").read_bytes()

    def test_tau_ignored_for_am_with_warning(self, workspace, tmp_path, capsys):
        assert self._gen(workspace, tmp_path / "o.tsv", "am", ("--tau", "0.5")) == 0
        assert "ignored" in capsys.readouterr().err

    def test_missing_model_exit_2(self, workspace, tmp_path):
        code = main(
            [
                "corruptor", "generate",
                "--model", str(tmp_path / "missing.wsm"),
                "--input", str(workspace / "clean.txt"),
                "--strategy", "am",
                "--out", str(tmp_path / "o.tsv"),
            ]
        )
        assert code == 2


class TestDatasetBuild:
    def test_build_and_rerun_identical(self, workspace, tmp_path):
        gen = tmp_path / "gen.tsv"
        main(
            [
                "corruptor", "generate",
                "--model", str(workspace / "model.wsm"),
                "--input", str(workspace / "clean.txt"),
                "--strategy", "ts", "--samples", "4", "--seed", "3",
                "--out", str(gen),
            ]
        )
        a, b = tmp_path / "a.labeled", tmp_path / "b.labeled"
        for out in (a, b):
            assert main(["dataset", "build", "--pairs", str(gen), "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()
        data = corpus.read_labeled(a)
        assert data
        assert all(ls.labels.count("i") <= 5 for ls in data)

    def test_max_errors_zero(self, workspace, tmp_path):
        pairs = tmp_path / "pairs.tsv"
        pairs.write_text("a b c\ta b c\na b c\tx y z w q r\n", encoding="utf-8")
        out = tmp_path / "strict.labeled"
        main(["dataset", "build", "--pairs", str(pairs), "--max-errors", "0", "--out", str(out)])
        data = corpus.read_labeled(out)
        assert len(data) == 1
        assert set(data[0].labels) == {"c"}

    def test_no_dedup(self, tmp_path):
        pairs = tmp_path / "pairs.tsv"
        pairs.write_text("a b\ta b\na b\ta b\n", encoding="utf-8")
        out = tmp_path / "kept.labeled"
        main(["dataset", "build", "--pairs", str(pairs), "--no-dedup", "--out", str(out)])
        assert len(corpus.read_labeled(out)) == 2


class TestDetector:
    def _train(self, workspace, out, extra=()):
        return main(
            [
                "detector", "train",
                "--real", str(workspace / "real.labeled"),
                "--dev", str(workspace / "dev.labeled"),
                "--out", str(out),
                "--cell-size", "8", "--emb-size", "6",
                "--max-epochs", "4", "--patience", "5", "--seed", "2",
                *extra,
            ]
        )

    def test_train_emits_history_jsonl(self, workspace, tmp_path, capsys):
        assert self._train(workspace, tmp_path / "det.wsd") == 0
        lines = capsys.readouterr().out.strip().splitlines()
        rows = [json.loads(line) for line in lines if line.startswith("{")]
        assert rows and all({"epoch", "source", "dev_f05"} == set(r) for r in rows)

    def test_train_deterministic(self, workspace, tmp_path):
        self._train(workspace, tmp_path / "one.wsd")
        self._train(workspace, tmp_path / "two.wsd")
        assert (tmp_path / "one.wsd").read_bytes() == (tmp_path / "two.wsd").read_bytes()

    def test_alternate_with_synthetic(self, workspace, tmp_path, capsys):
        synth = tmp_path / "synthetic.labeled"
        corpus.write_labeled(toylang.make_labeled(10, seed=42), synth)
        code = self._train(
            workspace, tmp_path / "det.wsd", ("--synthetic", str(synth), "--alternate")
        )
        assert code == 0
        rows = [
            json.loads(line)
            for line in capsys.readouterr().out.strip().splitlines()
            if line.startswith("{")
        ]
        assert {"synthetic", "real"} == {r["source"] for r in rows}

    def test_eval_json_output(self, workspace, tmp_path, capsys):
        model = tmp_path / "det.wsd"
        self._train(workspace, model)
        capsys.readouterr()
        code = main(
            [
                "detector", "eval",
                "--model", str(model),
                "--test", str(workspace / "test.labeled"),
                "--json",
            ]
        )
        assert code == 0
        metrics = json.loads(capsys.readouterr().out)
        assert metrics["beta"] == 0.5
        assert set(metrics) == {"precision", "recall", "f", "beta", "tp", "fp", "fn"}

    def test_eval_human_output(self, workspace, tmp_path, capsys):
        model = tmp_path / "det.wsd"
        self._train(workspace, model)
        capsys.readouterr()
        main(["detector", "eval", "--model", str(model), "--test", str(workspace / "test.labeled")])
        out = capsys.readouterr().out
        assert out.startswith("P ") and "F0.5" in out


class TestSeedAndExitCodes:
    def test_wrongsmith_seed_env_is_default(self, monkeypatch):
        from wrongsmith.cli import build_parser

        monkeypatch.setenv("WRONGSMITH_SEED", "777")
        parser = build_parser()
        args = parser.parse_args(
            ["corruptor", "generate", "--model", "m", "--input", "i",
             "--strategy", "am", "--out", "o"]
        )
        assert args.seed == 777

    def test_generate_defaults(self):
        from wrongsmith.cli import build_parser

        args = build_parser().parse_args(
            ["corruptor", "generate", "--model", "m", "--input", "i",
             "--strategy", "ts", "--out", "o"]
        )
        assert args.beam == 11
        assert args.samples == 10
        assert args.tau is None  # resolves to 0.05 unless given

    def test_internal_invariant_violation_exits_3(self, workspace, tmp_path, monkeypatch):
        from wrongsmith import seq2seq
        from wrongsmith.errors import WrongsmithError

        def boom(*args, **kwargs):
            raise WrongsmithError("non-finite parameter after epoch 1 batch 1")

        monkeypatch.setattr(seq2seq, "train", boom)
        code = main(_train_args(workspace, tmp_path / "m.wsm"))
        assert code == 3


class TestTuringCli:
    def test_too_few_items_exit_2(self, tmp_path):
        real = tmp_path / "real.txt"
        synth = tmp_path / "synth.txt"
        real.write_text("one sentence .\n", encoding="utf-8")
        synth.write_text("another sentence .\n", encoding="utf-8")
        code = main(
            ["turing", "serve", "--real", str(real), "--synthetic", str(synth), "--n", "50"]
        )
        assert code == 2

    def test_serve_subprocess_round_trip(self, tmp_path):
        real = tmp_path / "real.txt"
        synth = tmp_path / "synth.txt"
        real.write_text("".join(f"real item {i} .\n" for i in range(5)), encoding="utf-8")
        synth.write_text("".join(f"fake item {i} .\n" for i in range(5)), encoding="utf-8")
        out = tmp_path / "metrics.json"
        with socket.socket() as sock:
            sock.bind(("127.0.0.1", 0))
            port = sock.getsockname()[1]
        proc = subprocess.Popen(
            [
                sys.executable, "-m", "wrongsmith", "turing", "serve",
                "--real", str(real), "--synthetic", str(synth),
                "--n", "3", "--port", str(port), "--seed", "4",
                "--out", str(out),
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        base = f"http://127.0.0.1:{port}"
        try:
            payload = None
            for _ in range(100):
                try:
                    with urllib.request.urlopen(base + "/api/session") as resp:
                        payload = json.loads(resp.read())
                    break
                except OSError:
                    time.sleep(0.05)
            assert payload is not None and len(payload["items"]) == 6
            req = urllib.request.Request(
                base + "/api/judgment",
                data=json.dumps({"id": payload["items"][0]["id"], "synthetic": True}).encode(),
                method="POST",
            )
            with urllib.request.urlopen(req) as resp:
                assert resp.status == 204
            req = urllib.request.Request(base + "/api/close", data=b"{}", method="POST")
            with urllib.request.urlopen(req) as resp:
                metrics = json.loads(resp.read())
            assert json.loads(out.read_text()) == metrics
        finally:
            proc.terminate()
            proc.wait(timeout=10)
