import json

from click.testing import CliRunner

from sgt.cli import main


def test_make_data_train_eval_pipeline(tmp_path):
    runner = CliRunner()
    data_dir = tmp_path / "corpus"
    result = runner.invoke(main, ["make-data", "--out", str(data_dir), "--clips", "12", "--seed", "3"])
    assert result.exit_code == 0, result.output
    assert (data_dir / "index.json").exists()

    config = {
        "epochs": 2,
        "seed": 3,
        "extractor_epochs": 3,
        "model": {"audio_channels": 16, "word_hidden": 16, "decoder_hidden": 48, "critic_channels": 32},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(config))
    ckpt = tmp_path / "model.ckpt"
    result = runner.invoke(
        main, ["train", "--config", str(cfg_path), "--data", str(data_dir), "--out", str(ckpt)]
    )
    assert result.exit_code == 0, result.output
    assert ckpt.exists()
    history = (tmp_path / "model.ckpt.history.csv").read_text().splitlines()
    assert history[0].startswith("epoch,fgd,pcs,scs")
    assert len(history) == 3  # header + 2 epochs

    report = tmp_path / "report.csv"
    result = runner.invoke(
        main,
        ["eval", "--ckpt", str(ckpt), "--data", str(data_dir), "--report", str(report), "--config", str(cfg_path)],
    )
    assert result.exit_code == 0, result.output
    rows = dict(line.split(",") for line in report.read_text().splitlines()[1:])
    assert set(rows) == {"fgd_no_controls", "fgd_pose_controls", "fgd_style_controls", "pcs", "scs"}
    assert all(float(v) >= 0 for v in rows.values())


def test_toml_config(tmp_path):
    runner = CliRunner()
    cfg = tmp_path / "cfg.toml"
    cfg.write_text('epochs = 1\nseed = 9\n[model]\ndecoder_hidden = 32\n')
    from sgt.cli import _read_config

    loaded = _read_config(str(cfg))
    assert loaded.epochs == 1 and loaded.seed == 9 and loaded.model.decoder_hidden == 32
