from __future__ import annotations

from pathlib import Path

import pytest

from proofbench.pomodel import PogFile, load_pog

REPO_ROOT = Path(__file__).resolve().parent.parent
DEMO_POG = REPO_ROOT / "samples" / "demo.pog"


@pytest.fixture(scope="session")
def demo_pog() -> PogFile:
    return load_pog(DEMO_POG)


@pytest.fixture(scope="session")
def demo_path() -> Path:
    return DEMO_POG
