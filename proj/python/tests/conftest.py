import os
import pathlib
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("TVSCB_CLI") or shutil.which("tvscb")
    if not path:
        pytest.skip("tvscb executable not found (set TVSCB_CLI)")
    return path


@pytest.fixture(scope="session")
def schemas():
    root = os.environ.get("TVSCB_SCHEMAS")
    if root:
        return pathlib.Path(root)
    return pathlib.Path(__file__).resolve().parents[2] / "schemas"
