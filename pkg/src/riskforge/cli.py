"""Batch command-line entry point: inspect, augment, benchmark, explain, serve.

Each command is a thin wrapper over the library, writes its outputs plus a
run manifest into --out-dir, and exits non-zero with a distinct code per
error class. All randomness flows through explicit seeds; data outputs carry
no timestamps, so identical flags give byte-identical files (manifests, which
do record wall-clock times, are provenance rather than data).
"""

from __future__ import annotations

import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__, reports, synth
from .benchmark import (
    DEFAULT_FRACTIONS,
    DEFAULT_SEEDS,
    render_table,
    repeated_evaluation,
    worker_count,
)
from .dataset import imputation_defaults, impute, load_csv, stratified_split, write_csv
from .errors import MissingInputError, RiskforgeError
from .explain import (
    BackgroundSet,
    beeswarm_export,
    dependence_values,
    explain_row,
    gain_importance,
    global_mean_abs_shap,
)
from .learners import FAMILY_REGISTRY, TrainConfig, load_artifact, save_artifact, train_family
from .schema import CATEGORICAL, FeatureSchema
from .stats import class_conditional_moments, group_label_counts, spearman_matrix, term_frequencies

TREE_FAMILY_KEYS = ("decision_tree", "random_forest", "gradient_boosted")


class _Manifest:
    """Collects inputs/outputs for the run manifest written at command end."""

    def __init__(self, command: str, out_dir: Path, config: dict):
        self.command = command
        self.out_dir = out_dir
        self.config = config
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []
        self.started = datetime.now(timezone.utc).isoformat()
        self.t0 = time.time()

    def add_input(self, path: str | Path) -> None:
        p = Path(path)
        self.inputs[str(p)] = reports.file_sha256(p)

    def add_output(self, path: Path) -> None:
        self.outputs.append(str(path.relative_to(self.out_dir)))

    def write(self) -> Path:
        payload = {
            "command": self.command,
            "argv": sys.argv[1:],
            "config": self.config,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
            "toolkit_version": __version__,
            "started_at": self.started,
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "elapsed_seconds": round(time.time() - self.t0, 3),
        }
        return reports.write_report(self.out_dir / "manifest.json", reports.KIND_MANIFEST, payload)


def _load_inputs(csv_path: str, schema_path: str | None, manifest: _Manifest):
    if schema_path is None:
        raise MissingInputError("a --schema file is required")
    schema = FeatureSchema.load(schema_path)
    ds = impute(load_csv(csv_path, schema))
    manifest.add_input(schema_path)
    manifest.add_input(csv_path)
    return schema, ds


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    code = getattr(exc, "exit_code", 1)
    sys.exit(code)


@click.group()
@click.version_option(version=__version__, prog_name="riskforge")
@click.option("--schema", "schema_path", type=click.Path(), default=None, help="feature schema JSON")
@click.option("--seed", type=int, default=42, show_default=True, help="base random seed")
@click.option("--out-dir", type=click.Path(), default="out", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["report", "table"]), default="report", show_default=True)
@click.pass_context
def main(ctx, schema_path, seed, out_dir, fmt):
    """riskforge: augmentation, benchmarking and Shapley attribution for tabular risk data."""
    ctx.ensure_object(dict)
    ctx.obj.update(schema_path=schema_path, seed=seed, out_dir=Path(out_dir), fmt=fmt)


@main.command()
@click.option("--csv", "csv_path", required=True, type=click.Path())
@click.option("--top-n", type=int, default=50, show_default=True, help="terms kept per text column")
@click.pass_context
def inspect(ctx, csv_path, top_n):
    """Descriptive reports: moments, group counts, term frequencies, correlations."""
    obj = ctx.obj
    out_dir: Path = obj["out_dir"]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        manifest = _Manifest("inspect", out_dir, {"csv": csv_path, "top_n": top_n})
        schema, ds = _load_inputs(csv_path, obj["schema_path"], manifest)

        moments = class_conditional_moments(ds)
        manifest.add_output(
            reports.write_report(out_dir / "moments.json", reports.KIND_MOMENTS, reports.moments_payload(moments))
        )
        counts_payload = {
            "features": [
                reports.group_counts_payload(spec.name, group_label_counts(ds, spec.name))
                for spec in schema.features
                if spec.kind == CATEGORICAL
            ]
        }
        manifest.add_output(
            reports.write_report(out_dir / "group_counts.json", reports.KIND_GROUP_COUNTS, counts_payload)
        )
        for column in schema.text_columns:
            terms = term_frequencies(ds, column, top_n=top_n)
            manifest.add_output(
                reports.write_report(
                    out_dir / f"terms_{column}.json", reports.KIND_TERMS, reports.terms_payload(column, terms)
                )
            )
        corr = spearman_matrix(ds)
        manifest.add_output(
            reports.write_report(out_dir / "spearman.json", reports.KIND_CORRELATION, reports.correlation_payload(corr))
        )
        manifest.write()
        if obj["fmt"] == "table":
            for name in ("age",):
                if name in schema.feature_names:
                    m1 = moments.moments[name][1]
                    m0 = moments.moments[name][0]
                    click.echo(f"{name}: suicide ({m1[0]:.2f}, {m1[1]:.2f})  other ({m0[0]:.2f}, {m0[1]:.2f})")
            click.echo(f"reports in {out_dir}")
    except RiskforgeError as exc:
        _fail(exc)


@main.command()
@click.option("--csv", "csv_path", required=True, type=click.Path())
@click.option("--n", "n_rows", type=int, default=50000, show_default=True)
@click.option("--balance", is_flag=True, help="generate a balanced class mix instead of the fitted prior")
@click.option("--fidelity-seeds", type=int, default=1, show_default=True, help="average fidelity over this many generation seeds")
@click.pass_context
def augment(ctx, csv_path, n_rows, balance, fidelity_seeds):
    """Fit the class-conditional synthesizer and generate an augmented CSV."""
    obj = ctx.obj
    out_dir: Path = obj["out_dir"]
    seed = obj["seed"]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        manifest = _Manifest(
            "augment",
            out_dir,
            {"csv": csv_path, "n": n_rows, "seed": seed, "balance": balance, "fidelity_seeds": fidelity_seeds},
        )
        schema, ds = _load_inputs(csv_path, obj["schema_path"], manifest)
        synthesizer = synth.fit(ds)
        ratio = 0.5 if balance else None

        synthetic = synth.generate(synthesizer, n_rows, seed=seed, class_ratio=ratio)
        csv_out = out_dir / "synthetic.csv"
        write_csv(synthetic, csv_out)
        manifest.add_output(csv_out)

        synth_out = out_dir / "synthesizer.json"
        synthesizer.save(synth_out)
        manifest.add_output(synth_out)

        seeds = [seed + i for i in range(fidelity_seeds)]
        fidelity = synth.averaged_fidelity(ds, synthesizer, n_rows, seeds, class_ratio=ratio)
        manifest.add_output(
            reports.write_report(out_dir / "fidelity.json", reports.KIND_FIDELITY, reports.fidelity_payload(fidelity))
        )
        manifest.write()
        if obj["fmt"] == "table":
            click.echo(
                f"generated {n_rows} rows (seed {seed}); max |mean delta| = {fidelity.max_delta_mean:.4f}"
            )
    except RiskforgeError as exc:
        _fail(exc)


def _parse_families(text: str) -> tuple[str, ...]:
    keys = tuple(k.strip() for k in text.split(",") if k.strip())
    unknown = [k for k in keys if k not in FAMILY_REGISTRY]
    if unknown:
        raise MissingInputError(f"unknown families: {unknown}; choose from {sorted(FAMILY_REGISTRY)}")
    return keys


@main.command()
@click.option("--csv", "csv_path", required=True, type=click.Path())
@click.option("--families", default="dt,rf,gbt,lr,perceptron,svm", show_default=True)
@click.option("--fractions", default=",".join(str(f) for f in DEFAULT_FRACTIONS), show_default=True)
@click.option("--seeds", default=",".join(str(s) for s in DEFAULT_SEEDS), show_default=True)
@click.option("--threads", type=int, default=None, help="worker cap (default: RISKFORGE_THREADS or cpu count)")
@click.option("--skip-artifacts", is_flag=True, help="do not save per-family model artifacts")
@click.pass_context
def benchmark(ctx, csv_path, families, fractions, seeds, threads, skip_artifacts):
    """Repeated-split benchmark over the model families; emits the metrics table."""
    obj = ctx.obj
    out_dir: Path = obj["out_dir"]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        family_keys = _parse_families(families)
        fraction_list = tuple(float(f) for f in fractions.split(","))
        seed_list = tuple(int(s) for s in seeds.split(","))
        manifest = _Manifest(
            "benchmark",
            out_dir,
            {
                "csv": csv_path,
                "families": list(family_keys),
                "fractions": list(fraction_list),
                "seeds": list(seed_list),
                "train_seed": obj["seed"],
            },
        )
        schema, ds = _load_inputs(csv_path, obj["schema_path"], manifest)
        cfg = TrainConfig(seed=obj["seed"])
        report = repeated_evaluation(
            family_keys, ds, fractions=fraction_list, seeds=seed_list, cfg=cfg, n_jobs=worker_count(threads)
        )
        manifest.add_output(
            reports.write_report(out_dir / "benchmark.json", reports.KIND_BENCHMARK, report.to_dict())
        )
        table = render_table(report)
        table_path = out_dir / "benchmark_table.txt"
        table_path.write_text(table, encoding="utf-8")
        manifest.add_output(table_path)

        if not skip_artifacts:
            pair = stratified_split(ds, fraction_list[0], seed_list[0])
            background = BackgroundSet.from_dataset(pair.train, size=128, seed=obj["seed"])
            defaults = imputation_defaults(pair.train)
            for key in family_keys:
                import warnings

                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    model = train_family(key, pair.train, cfg)
                metrics = {name: list(pair_) for name, pair_ in report.aggregate(key).items()}
                artifact_path = out_dir / f"model_{key}.json"
                save_artifact(
                    model,
                    artifact_path,
                    schema,
                    train_config=cfg,
                    metrics=metrics,
                    background=background.rows,
                    imputation_defaults=defaults,
                )
                manifest.add_output(artifact_path)
        manifest.write()
        if obj["fmt"] == "table":
            click.echo(table, nl=False)
        failures = report.errors()
        if failures:
            click.echo(f"warning: {len(failures)} benchmark cells failed", err=True)
    except RiskforgeError as exc:
        _fail(exc)


@main.command()
@click.option("--artifact", "artifact_path", required=True, type=click.Path())
@click.option("--csv", "csv_path", required=True, type=click.Path(), help="data for explicands/background")
@click.option("--mode", type=click.Choice(["single", "global", "dependence", "beeswarm"]), default="single", show_default=True)
@click.option("--row", "row_index", type=int, default=0, show_default=True, help="explicand row for single mode")
@click.option("--feature", default=None, help="feature name for dependence mode")
@click.option("--sample", type=int, default=1000, show_default=True, help="explained rows for global/dependence/beeswarm")
@click.option("--background-size", type=int, default=128, show_default=True)
@click.pass_context
def explain(ctx, artifact_path, csv_path, mode, row_index, feature, sample, background_size):
    """Shapley attribution documents from a saved model artifact."""
    obj = ctx.obj
    out_dir: Path = obj["out_dir"]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        manifest = _Manifest(
            "explain",
            out_dir,
            {
                "artifact": artifact_path,
                "csv": csv_path,
                "mode": mode,
                "row": row_index,
                "feature": feature,
                "sample": sample,
                "background_size": background_size,
                "seed": obj["seed"],
            },
        )
        artifact = load_artifact(
            artifact_path, schema=FeatureSchema.load(obj["schema_path"]) if obj["schema_path"] else None
        )
        manifest.add_input(artifact_path)
        schema = artifact.schema
        ds = impute(load_csv(csv_path, schema))
        manifest.add_input(csv_path)

        if artifact.background is not None:
            bg = BackgroundSet.from_rows(artifact.background[:background_size], source="artifact")
        else:
            bg = BackgroundSet.from_dataset(ds, size=background_size, seed=obj["seed"])

        if mode == "single":
            if not 0 <= row_index < ds.n_rows:
                raise MissingInputError(f"--row {row_index} outside 0..{ds.n_rows - 1}")
            exp = explain_row(artifact.model, ds.values[row_index], bg, feature_names=schema.feature_names)
            manifest.add_output(
                reports.write_report(
                    out_dir / "explanation.json", reports.KIND_EXPLANATION, reports.explanation_payload(exp)
                )
            )
            if obj["fmt"] == "table":
                click.echo(f"base={exp.base_value:.5f} prediction={exp.prediction:.5f} [{exp.output_scale}]")
                for record in exp.to_records():
                    click.echo(
                        f"{record['feature_id']:>3}  {record['feature']:<30} "
                        f"{record['feature_value']:>10.3f}  {record['phi']:>+10.5f}"
                    )
        else:
            explicands = ds
            if ds.n_rows > sample:
                idx = np.sort(np.random.default_rng(obj["seed"]).choice(ds.n_rows, size=sample, replace=False))
                explicands = ds.take(idx)
            if mode == "global":
                importance = global_mean_abs_shap(artifact.model, explicands, bg)
                manifest.add_output(
                    reports.write_report(
                        out_dir / "importance.json", reports.KIND_IMPORTANCE, reports.importance_payload(importance)
                    )
                )
                if artifact.family in TREE_FAMILY_KEYS:
                    gain = gain_importance(artifact.model)
                    manifest.add_output(
                        reports.write_report(
                            out_dir / "importance_gain.json", reports.KIND_IMPORTANCE, reports.importance_payload(gain)
                        )
                    )
                if obj["fmt"] == "table":
                    for name in importance.ranking[:10]:
                        j = schema.index_of(name)
                        click.echo(f"{name:<30} {importance.importances[j]:.5f}")
            elif mode == "dependence":
                if feature is None:
                    raise MissingInputError("--feature is required for dependence mode")
                dep = dependence_values(artifact.model, explicands, bg, feature)
                manifest.add_output(
                    reports.write_report(
                        out_dir / f"dependence_{feature}.json", reports.KIND_DEPENDENCE, reports.dependence_payload(dep)
                    )
                )
            else:  # beeswarm
                export = beeswarm_export(artifact.model, explicands, bg)
                manifest.add_output(
                    reports.write_report(out_dir / "beeswarm.json", reports.KIND_BEESWARM, export)
                )
        manifest.write()
    except RiskforgeError as exc:
        _fail(exc)


@main.command()
@click.option("--artifact", "artifact_path", required=True, type=click.Path())
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8321, show_default=True)
@click.option("--background-size", type=int, default=128, show_default=True)
@click.pass_context
def serve(ctx, artifact_path, host, port, background_size):
    """Run the HTTP scoring service on one model artifact."""
    from .service import serve as run_service

    try:
        run_service(
            artifact_path,
            schema_path=ctx.obj["schema_path"],
            host=host,
            port=port,
            background_size=background_size,
        )
    except RiskforgeError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
