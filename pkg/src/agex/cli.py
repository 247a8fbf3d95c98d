"""Single `agex` entry point dispatching all workflows.

Exit codes: 0 success, 2 usage errors, 1 runtime errors. Logs go to
stderr; each command prints a one-line JSON summary to stdout so runs can
be scripted.
"""

from __future__ import annotations

import csv as csv_mod
import io
import json
import sys
from pathlib import Path

import click
import numpy as np

from .utils import atomic_write_bytes, atomic_write_text


def _echo_json(payload: dict) -> None:
    click.echo(json.dumps(payload, sort_keys=True))


def _log(message: str) -> None:
    click.echo(message, err=True)


@click.group(name="agex")
def cli():
    """Age estimation and ranking on synthetic chest phantoms."""


# ---------------------------------------------------------------- gen-data


@cli.command("gen-data")
@click.option("--n-patients", type=int, required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--resolution", type=int, default=64, show_default=True)
@click.option("--multi-scan-fraction", type=float, default=0.28, show_default=True)
@click.option("--age-mean", type=float, default=61.2, show_default=True)
@click.option("--age-sd", type=float, default=19.0, show_default=True)
def gen_data(n_patients, out_dir, seed, resolution, multi_scan_fraction, age_mean, age_sd):
    """Generate a phantom dataset: manifest.csv plus PNG images."""
    from .phantom import generate_dataset

    records = generate_dataset(out_dir, n_patients=n_patients, resolution=resolution,
                               seed=seed, multi_scan_fraction=multi_scan_fraction,
                               age_mean=age_mean, age_sd=age_sd)
    _log(f"wrote {len(records)} images under {out_dir}")
    _echo_json({"command": "gen-data", "n_images": len(records),
                "n_patients": n_patients, "out": str(out_dir)})


# ---------------------------------------------------------------- training


def _load_config(config_path, **overrides):
    from .training import TrainConfig

    cfg = TrainConfig.from_file(config_path) if config_path else TrainConfig()
    fields = {k: v for k, v in overrides.items() if v is not None}
    if fields:
        from dataclasses import replace
        cfg = replace(cfg, **fields)
    return cfg


def _load_data(data_dir):
    from .phantom import make_splits, read_manifest

    manifest = read_manifest(Path(data_dir) / "manifest.csv")
    splits = make_splits(manifest, 0.8, 0.1, seed=0)
    return manifest, splits


@cli.command("train")
@click.option("--head", type=click.Choice(["regression", "expectation", "ordinal"]),
              default=None)
@click.option("--resolution", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None)
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--max-epochs", type=int, default=None)
@click.option("--train-size-cap", type=int, default=None)
def train(head, resolution, config_path, data_dir, out_dir, seed, max_epochs,
          train_size_cap):
    """Train one age model and save checkpoint + history CSV."""
    from .training.loop import evaluate_mae, train_age_model

    cfg = _load_config(config_path, head=head, resolution=resolution, seed=seed,
                       max_epochs=max_epochs, train_set_size_cap=train_size_cap)
    manifest, splits = _load_data(data_dir)
    _log(f"training {cfg.head} head at {cfg.resolution}px "
         f"(max {cfg.max_epochs} epochs, seed {cfg.seed})")
    est, history = train_age_model(cfg, manifest, splits, data_dir)
    out_dir = Path(out_dir)
    ckpt = out_dir / f"age_{cfg.head}_{cfg.resolution}.ckpt"
    est.save(ckpt)
    history.write_csv(out_dir / f"history_{cfg.head}_{cfg.resolution}.csv")
    test_mae = evaluate_mae(est, manifest, splits, "test", data_dir)
    _echo_json({"command": "train", "checkpoint": str(ckpt),
                "selected_epoch": history.selected_epoch,
                "val_mae": est.val_mae_, "test_mae": test_mae})


@cli.command("train-rank")
@click.option("--resolution", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None)
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--n-pairs", type=int, default=4000, show_default=True)
@click.option("--same-patient-fraction", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--max-epochs", type=int, default=None)
def train_rank(resolution, config_path, data_dir, out_dir, n_pairs,
               same_patient_fraction, seed, max_epochs):
    """Train the pairwise ranking model on sampled pairs."""
    from .training import sample_pairs
    from .training.loop import train_ranking_model

    cfg = _load_config(config_path, resolution=resolution, seed=seed,
                       max_epochs=max_epochs)
    manifest, splits = _load_data(data_dir)
    pairs = sample_pairs(manifest, splits, n_pairs, same_patient_fraction, cfg.seed)
    _log(f"training ranker at {cfg.resolution}px on {len(pairs)} pairs")
    ranker, history = train_ranking_model(cfg, pairs, manifest, data_dir)
    out_dir = Path(out_dir)
    ckpt = out_dir / f"ranker_{cfg.resolution}.ckpt"
    ranker.save(ckpt)
    history.write_csv(out_dir / f"history_ranker_{cfg.resolution}.csv")
    _echo_json({"command": "train-rank", "checkpoint": str(ckpt),
                "n_pairs": len(pairs), "val_error": ranker.val_error_})


@cli.command("sweep")
@click.option("--sizes", type=str, required=True, help="comma-separated train sizes")
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None)
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--max-epochs", type=int, default=None)
def sweep(sizes, config_path, data_dir, out_dir, seed, max_epochs):
    """Dataset-size sweep plus logarithmic fit of MAE vs size."""
    from .stats import log_fit
    from .training.sweep import dataset_size_sweep

    size_list = [int(s) for s in sizes.split(",") if s]
    cfg = _load_config(config_path, seed=seed, max_epochs=max_epochs)
    manifest, splits = _load_data(data_dir)
    results = dataset_size_sweep(cfg, manifest, splits, size_list, data_dir)
    out_dir = Path(out_dir)
    buf = io.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    writer.writerow(["train_size", "test_mae"])
    for size, mae in results:
        writer.writerow([size, f"{mae:.6g}"])
    atomic_write_text(out_dir / "sweep.csv", buf.getvalue())
    summary = {"command": "sweep", "results": [[s, m] for s, m in results]}
    if len(size_list) >= 2:
        a, b, rmse = log_fit([s for s, _ in results], [m for _, m in results])
        summary["log_fit"] = {"a": a, "b": b, "rmse": rmse}
    _echo_json(summary)


# ---------------------------------------------------------------- GAN


@cli.command("train-gan")
@click.option("--predictor", "predictor_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--lambda", "lambda_age", type=float, default=None,
              help="age-consistency weight (defaults to the config value)")
@click.option("--steps", type=int, default=20000, show_default=True)
@click.option("--batch-size", type=int, default=16, show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train_gan(predictor_path, data_dir, lambda_age, steps, batch_size, out_dir, seed):
    """Train the age-conditional GAN against a frozen age predictor."""
    from .gan import GanConfig, train_acgan
    from .models import AgeEstimator
    from .phantom import load_arrays
    from .training.loop import split_records

    predictor = AgeEstimator.load(predictor_path)
    manifest, splits = _load_data(data_dir)
    X, _ = load_arrays(split_records(manifest, splits, "train"), predictor.resolution,
                       data_dir)
    kwargs = {} if lambda_age is None else {"lambda_age": lambda_age}
    cfg = GanConfig(resolution=predictor.resolution, steps=steps,
                    batch_size=batch_size, seed=seed, **kwargs)
    _log(f"training GAN for {steps} steps at {cfg.resolution}px "
         f"(lambda={cfg.lambda_age})")
    gan, curves = train_acgan(cfg, X, predictor)
    out_dir = Path(out_dir)
    ckpt = out_dir / "gan.ckpt"
    gan.save(ckpt)
    buf = io.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    writer.writerow(["step", "d_real", "d_fake", "g_adv", "g_age", "lambda"])
    for c in curves:
        writer.writerow([c.step, f"{c.d_real:.6g}", f"{c.d_fake:.6g}",
                         f"{c.g_adv:.6g}", f"{c.g_age:.6g}", c.lam])
    atomic_write_text(out_dir / "gan_curves.csv", buf.getvalue())
    _echo_json({"command": "train-gan", "checkpoint": str(ckpt), "steps": steps,
                "final_g_age": curves[-1].g_age})


@cli.command("reage")
@click.option("--generator", "generator_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ages", type=str, default="15,35,55,75,95", show_default=True)
@click.option("--rows", type=int, default=2, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
def reage(generator_path, seed, ages, rows, out_path):
    """Render re-aging sweeps: one identity per row, diff map last column."""
    from .gan import AgeGan, difference_map, reage_sweep
    from .phantom.dataset import to_png_bytes

    gan = AgeGan.load(generator_path)
    age_list = [float(a) for a in ages.split(",") if a]
    res = gan.config.resolution
    gap = 2
    n_cols = len(age_list) + 1
    grid = np.ones((rows * res + (rows - 1) * gap,
                    n_cols * res + (n_cols - 1) * gap))
    for r in range(rows):
        w = gan.sample_latents(1, seed=seed + r)[0]
        sweep_imgs = reage_sweep(gan, w, age_list)
        diff = difference_map(sweep_imgs[0], sweep_imgs[-1])
        tiles = list(sweep_imgs) + [0.5 + diff / 2.0]
        for c, tile in enumerate(tiles):
            y0, x0 = r * (res + gap), c * (res + gap)
            grid[y0:y0 + res, x0:x0 + res] = tile
    atomic_write_bytes(out_path, to_png_bytes(np.clip(grid, 0.0, 1.0)))
    _log(f"wrote {rows}x{n_cols} re-aging grid to {out_path}")
    _echo_json({"command": "reage", "out": str(out_path), "ages": age_list,
                "rows": rows})


# ---------------------------------------------------------------- study


@cli.command("make-study")
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--pairs-per-bucket", type=int, default=40, show_default=True)
@click.option("--bucket-width-years", type=float, default=2.0, show_default=True)
@click.option("--n-buckets", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--study-id", type=str, default=None)
def make_study(data_dir, pairs_per_bucket, bucket_width_years, n_buckets, seed, study_id):
    """Create and persist a study over an existing dataset."""
    from .study import StudyService

    service = StudyService(data_dir)
    definition = service.create_study(pairs_per_bucket=pairs_per_bucket,
                                      bucket_width_years=bucket_width_years,
                                      n_buckets=n_buckets, seed=seed, study_id=study_id)
    _echo_json({"command": "make-study", "study_id": definition.study_id,
                "n_pairs": len(definition.pairs)})


@cli.command("serve-study")
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
def serve_study(data_dir, port, host):
    """Serve the study HTTP API (and any built UI) over uvicorn."""
    import uvicorn

    from .study import StudyService, create_app

    app = create_app(StudyService(data_dir))
    _log(f"serving study API from {data_dir} on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command("model-participant")
@click.option("--data", "data_dir", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--study-id", type=str, required=True)
@click.option("--checkpoint", "checkpoint_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--mode", type=click.Choice(["rank_model", "estimate_based"]), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="also write the study's responses CSV here")
@click.option("--seed", type=int, default=0, show_default=True)
def model_participant_cmd(data_dir, study_id, checkpoint_path, mode, out_path, seed):
    """Run a trained model over every pair of a study."""
    from .models import load_model
    from .study import StudyService, model_participant

    service = StudyService(data_dir)
    model = load_model(checkpoint_path)
    session = model_participant(service, study_id, model, mode, seed=seed)
    if out_path:
        atomic_write_text(out_path, service.export_responses_csv(study_id))
    _echo_json({"command": "model-participant", "session_id": session.session_id,
                "participant_id": session.participant_id,
                "n_responses": len(session.responded)})


@cli.command("analyze")
@click.option("--responses", "responses_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--truths", "truths_path", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--sigma", type=float, default=14.25, show_default=True,
              help="assumed sd of independent single-image age errors")
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
def analyze(responses_path, truths_path, sigma, out_path):
    """Summarize study responses and compare with the Gaussian ranking model."""
    from .stats import expected_rank_success, rank_success_pvalue, study_summary
    from .study.schema import RankResponse, StudyPair

    truths: dict[str, StudyPair] = {}
    with open(truths_path, newline="", encoding="utf-8") as fh:
        for row in csv_mod.DictReader(fh):
            truths[row["pair_id"]] = StudyPair(
                pair_id=row["pair_id"], image_a_id=row["image_a_id"],
                image_b_id=row["image_b_id"], true_age_a=float(row["true_age_a"]),
                true_age_b=float(row["true_age_b"]),
                separation_bucket=int(row["separation_bucket"]))
    responses: list[RankResponse] = []
    with open(responses_path, newline="", encoding="utf-8") as fh:
        for row in csv_mod.DictReader(fh):
            est = row.get("age_estimate_years", "")
            responses.append(RankResponse(
                session_id=row["session_id"], pair_id=row["pair_id"],
                choice=row["choice"],
                age_estimate_years=float(est) if est else None,
                estimated_image=row.get("estimated_image") or None,
                elapsed_ms=int(row.get("elapsed_ms") or 0)))

    report = study_summary(responses, truths)
    attempted = [r for r in responses if r.choice != "not_sure"]
    separations = [truths[r.pair_id].separation_years for r in attempted]
    if separations:
        expectation = expected_rank_success(separations, sigma, mc_runs=2000, seed=0)
        report["gaussian_null"] = {
            "sigma": sigma,
            "expected_success_attempted": expectation.mean_success,
            "mc_sd": expectation.mc_sd,
            "p_value_observed_or_more": rank_success_pvalue(
                report["n_correct"], separations, sigma),
        }
    atomic_write_text(out_path, json.dumps(report, indent=2, sort_keys=True))

    curves_path = Path(out_path).with_suffix(".buckets.csv")
    buf = io.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    writer.writerow(["bucket_lo_years", "bucket_hi_years", "accuracy", "count"])
    edges = report["rank_buckets"]["edges_years"]
    for lo, hi, acc, n in zip(edges[:-1], edges[1:],
                              report["rank_buckets"]["accuracy"],
                              report["rank_buckets"]["counts"]):
        writer.writerow([lo, hi, "" if acc != acc else f"{acc:.6g}", n])
    atomic_write_text(curves_path, buf.getvalue())
    _echo_json({"command": "analyze", "out": str(out_path),
                "success_all": report["success_all"],
                "success_attempted": report["success_attempted"]})


def main(argv=None) -> int:
    """Console entry point with stable exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except Exception as exc:  # runtime errors -> exit 1, message on stderr
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
