"""Deterministic builder for the bundled 1,000-record example cohort.

The toolkit's documentation pipeline starts from a public survey CSV that
cannot be redistributed here, so the repository ships a statistically matched
stand-in: same 19-feature layout, binary suicide label, a free-text death
reason column, and one extraneous id column that ingestion ignores.

Class-conditional statistics are pinned exactly: per-class age mean/std hit
their targets to float precision via affine correction, and every binary or
categorical column is laid out by exact per-class counts before an
independent deterministic shuffle. The separations are sized so the cohort
is learnable but not trivially separable (linear families land in the low
0.9s after augmentation).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .dataset import Dataset, write_csv
from .schema import FeatureSchema, FeatureSpec

COHORT_SEED = 902211
N_SUICIDE = 400
N_OTHER = 600

CSV_NAME = "cohort_1k.csv"
SCHEMA_NAME = "cohort_schema.json"

# per-class age (mean, population std), matched exactly
AGE_MOMENTS = {1: (49.01, 20.98), 0: (54.63, 23.01)}

# binary features: (suicide-class mean, other-class mean); all products with
# the class sizes are integers so the realized means are exact
BINARY_RATES = {
    "gender": (0.62, 0.48),
    "past_suicide_attempts": (0.18, 0.05),
    "suicidal_thoughts": (0.35, 0.08),
    "self_injury": (0.22, 0.05),
    "anger": (0.82, 0.10),
    "sleep_problem": (0.55, 0.40),
    "social_isolation": (0.55, 0.09),
    "depression": (0.58, 0.08),
    "humiliated": (0.45, 0.10),
}

# multi-code features: per-class probability vectors (exact count layout)
CATEGORICAL_RATES = {
    "religion": ([0.26, 0.18, 0.16, 0.25, 0.15], [0.22, 0.17, 0.15, 0.31, 0.15]),
    "race": ([0.52, 0.22, 0.14, 0.12], [0.50, 0.24, 0.15, 0.11]),
    "occupation": (
        [0.32, 0.22, 0.14, 0.05, 0.01, 0.12, 0.02, 0.12],
        [0.18, 0.12, 0.15, 0.12, 0.08, 0.15, 0.08, 0.12],
    ),
    "civil_status": ([0.28, 0.30, 0.16, 0.16, 0.10], [0.25, 0.45, 0.10, 0.12, 0.08]),
    "education_level": (
        [0.30, 0.17, 0.15, 0.12, 0.11, 0.09, 0.06],
        [0.10, 0.12, 0.13, 0.14, 0.15, 0.16, 0.20],
    ),
    "psychiatric_hospitalisations": ([0.62, 0.20, 0.11, 0.07], [0.80, 0.12, 0.05, 0.03]),
    "psychiatric_disorders": (
        [0.52, 0.18, 0.13, 0.10, 0.07],
        [0.68, 0.13, 0.09, 0.06, 0.04],
    ),
    "past_illnesses": ([0.40, 0.15, 0.12, 0.13, 0.20], [0.45, 0.16, 0.13, 0.11, 0.15]),
    "alcohol_drug_use": ([0.46, 0.29, 0.25], [0.60, 0.27, 0.13]),
}

CATEGORY_LABELS = {
    "gender": ["Female", "Male"],
    "religion": ["None", "Buddhist", "Muslim", "Christian", "Hindu"],
    "race": ["White", "Asian", "Black", "Mixed or other"],
    "occupation": [
        "Unemployed",
        "Agriculture and forestry",
        "Manual labour",
        "Administrative manager",
        "Police officer",
        "Clerical worker",
        "Security personnel",
        "Business owner",
    ],
    "civil_status": ["Single", "Married", "Divorced", "Widowed", "Separated"],
    "education_level": [
        "Grades 1-7",
        "Grades 8-9",
        "Grades 10-11",
        "Secondary completed",
        "Vocational diploma",
        "Undergraduate",
        "University degree or above",
    ],
    "psychiatric_hospitalisations": ["Never", "Once", "Twice", "Three or more"],
    "psychiatric_disorders": [
        "None",
        "Mood disorder",
        "Anxiety disorder",
        "Psychotic disorder",
        "Personality disorder",
    ],
    "past_illnesses": ["None", "Cardiovascular", "Diabetes", "Cancer", "Chronic pain"],
    "alcohol_drug_use": ["None", "Occasional", "Frequent"],
    "binary": ["No", "Yes"],
}

FEATURE_ORDER = [
    "age",
    "gender",
    "religion",
    "race",
    "occupation",
    "civil_status",
    "education_level",
    "psychiatric_hospitalisations",
    "past_suicide_attempts",
    "suicidal_thoughts",
    "self_injury",
    "psychiatric_disorders",
    "past_illnesses",
    "alcohol_drug_use",
    "anger",
    "sleep_problem",
    "social_isolation",
    "depression",
    "humiliated",
]

# class-conditional death-reason phrase pools (phrase, weight)
DEATH_REASONS_SUICIDE = [
    ("mental disorders", 9),
    ("family disputes", 8),
    ("chronic depression", 5),
    ("social isolation distress", 4),
    ("financial hardship", 4),
    ("substance abuse", 3),
    ("physical disabilities", 3),
    ("relationship breakdown", 2),
    ("workplace harassment", 2),
]
DEATH_REASONS_OTHER = [
    ("chronic diseases", 9),
    ("physical disabilities", 7),
    ("heart failure", 5),
    ("cancer complications", 4),
    ("respiratory failure", 3),
    ("kidney failure", 3),
    ("mental disorders", 3),
    ("road accident", 2),
    ("stroke", 2),
    ("old age frailty", 2),
]


def cohort_schema() -> FeatureSchema:
    features = []
    for name in FEATURE_ORDER:
        if name == "age":
            features.append(FeatureSpec(name="age", kind="numeric"))
        elif name in BINARY_RATES:
            features.append(
                FeatureSpec(
                    name=name,
                    kind="categorical",
                    categories=tuple(enumerate(CATEGORY_LABELS["binary"])),
                )
            )
        else:
            features.append(
                FeatureSpec(
                    name=name,
                    kind="categorical",
                    categories=tuple(enumerate(CATEGORY_LABELS[name])),
                )
            )
    return FeatureSchema(features=tuple(features), label_name="suicide", text_columns=("death_reason",))


def _exact_counts(probs: list[float], n: int) -> list[int]:
    """Largest-remainder rounding of n * probs to integers summing to n."""
    raw = [p * n for p in probs]
    counts = [int(np.floor(v)) for v in raw]
    deficit = n - sum(counts)
    remainders = sorted(range(len(probs)), key=lambda i: (raw[i] - counts[i], -i), reverse=True)
    for i in remainders[:deficit]:
        counts[i] += 1
    return counts


def _column_from_counts(counts: list[int], rng: np.random.Generator) -> np.ndarray:
    col = np.repeat(np.arange(len(counts), dtype=np.float64), counts)
    rng.shuffle(col)
    return col


def _exact_moment_ages(n: int, mean: float, std: float, rng: np.random.Generator) -> np.ndarray:
    z = np.clip(rng.standard_normal(n), -2.2, 2.2)
    for _ in range(3):
        z = (z - z.mean()) / z.std()
    return mean + std * z


def build_cohort(seed: int = COHORT_SEED) -> Dataset:
    """The full 1,000-record example dataset, bit-deterministic per seed."""
    schema = cohort_schema()
    rng = np.random.default_rng(seed)
    class_sizes = {1: N_SUICIDE, 0: N_OTHER}

    columns: dict[str, np.ndarray] = {}
    per_class: dict[str, dict[int, np.ndarray]] = {name: {} for name in FEATURE_ORDER}
    for label in (1, 0):
        n = class_sizes[label]
        mean, std = AGE_MOMENTS[label]
        per_class["age"][label] = _exact_moment_ages(n, mean, std, rng)
        for name, (rate_s, rate_o) in BINARY_RATES.items():
            rate = rate_s if label == 1 else rate_o
            per_class[name][label] = _column_from_counts(_exact_counts([1 - rate, rate], n), rng)
        for name, (probs_s, probs_o) in CATEGORICAL_RATES.items():
            probs = probs_s if label == 1 else probs_o
            per_class[name][label] = _column_from_counts(_exact_counts(probs, n), rng)

    labels = np.concatenate([np.ones(N_SUICIDE, dtype=np.int64), np.zeros(N_OTHER, dtype=np.int64)])
    for name in FEATURE_ORDER:
        columns[name] = np.concatenate([per_class[name][1], per_class[name][0]])

    reasons: list[str] = []
    for label, pool in ((1, DEATH_REASONS_SUICIDE), (0, DEATH_REASONS_OTHER)):
        phrases = [p for p, _ in pool]
        weights = np.array([w for _, w in pool], dtype=np.float64)
        weights /= weights.sum()
        picks = rng.choice(len(phrases), size=class_sizes[label], p=weights)
        reasons.extend(phrases[i] for i in picks)

    # one interleaving permutation so the file is not sorted by label
    order = rng.permutation(N_SUICIDE + N_OTHER)
    values = np.column_stack([columns[name] for name in FEATURE_ORDER])[order]
    labels = labels[order]
    reasons = tuple(np.asarray(reasons, dtype=object)[order])
    return Dataset(schema=schema, values=values, labels=labels, text_values={"death_reason": reasons})


def write_cohort(out_dir: str | Path, seed: int = COHORT_SEED) -> tuple[Path, Path]:
    """Write cohort_1k.csv (with a record_id column) and cohort_schema.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ds = build_cohort(seed)
    schema_path = out / SCHEMA_NAME
    ds.schema.save(schema_path)
    csv_path = out / CSV_NAME
    write_csv(ds, csv_path)
    # prepend a record_id column ingestion should ignore
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    amended = ["record_id," + lines[0]]
    amended.extend(f"P{i + 1:04d},{line}" for i, line in enumerate(lines[1:]))
    csv_path.write_text("\n".join(amended) + "\n", encoding="utf-8")
    return csv_path, schema_path


def main(argv: list[str] | None = None) -> None:
    import argparse

    parser = argparse.ArgumentParser(description="regenerate the bundled example cohort")
    parser.add_argument("--out-dir", default="data")
    parser.add_argument("--seed", type=int, default=COHORT_SEED)
    args = parser.parse_args(argv)
    csv_path, schema_path = write_cohort(args.out_dir, args.seed)
    print(f"wrote {csv_path} and {schema_path}")


if __name__ == "__main__":
    main()
