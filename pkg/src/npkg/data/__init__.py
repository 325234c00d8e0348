"""Bundled relation map and the NPDI desk fixture."""
from importlib import resources
from pathlib import Path

FIXTURES = ("npdi",)


def fixture_dir(name: str = "npdi") -> Path:
    if name not in FIXTURES:
        raise KeyError(f"no bundled fixture named {name!r}")
    return Path(str(resources.files(__name__).joinpath("fixtures", name)))
