"""Access to the JSON schemas shipped with the package."""
import json
from importlib import resources

NAMES = ("omega_report", "lle_report", "synth_manifest", "sweep_report", "stats_report",
         "recommendation")


def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}; expected one of {NAMES}")
    text = resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
