"""Validate srabench JSON outputs against the schemas in schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        schemas[path.name] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (name, Resource.from_contents(doc)) for name, doc in schemas.items()
    )
    return schemas, registry


def run(binary, *args):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return json.loads(proc.stdout)


def main():
    binary, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(schema_dir)
    models = "LogisticRegression,GaussianNB,LDA,DecisionTree"

    with tempfile.TemporaryDirectory() as tmp:
        real = str(pathlib.Path(tmp) / "real.csv")
        noisy = str(pathlib.Path(tmp) / "noisy.csv")
        subprocess.run(
            [binary, "gen", "--out", real, "--n", "300", "--d", "3",
             "--separation", "1.5", "--flip", "0.2", "--synthetic-out", noisy],
            check=True,
        )
        outputs = {
            "ranking_report.schema.json": run(
                binary, "evaluate", "--real", real, "--synthetic", noisy, "--models", models),
            "sweep_report.schema.json": run(
                binary, "sweep", "--real", real, "--p-grid", "0,0.2", "--reps", "2",
                "--models", models),
            "selection_report.schema.json": run(
                binary, "simulate", "--real", real, "--synthetic", noisy, "--models", models,
                "--runs", "5"),
        }

    failures = 0
    for name, doc in outputs.items():
        validator = jsonschema.Draft202012Validator(schemas[name], registry=registry)
        errors = list(validator.iter_errors(doc))
        for err in errors:
            print(f"{name}: {err.json_path}: {err.message}")
        failures += len(errors)
        # Extra keys must be rejected.
        tampered = dict(doc, unexpected=1)
        if validator.is_valid(tampered):
            print(f"{name}: accepted an unknown top-level key")
            failures += 1
        print(f"{name}: {'ok' if not errors else 'invalid'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
