import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "treelike" / "schemas"


@pytest.fixture(scope="session")
def schema_validator():
    import jsonschema
    from referencing import Registry, Resource

    resources = []
    for path in SCHEMA_DIR.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    registry = Registry().with_resources(resources)

    def validate(instance, name):
        schema = json.loads((SCHEMA_DIR / name).read_text())
        jsonschema.Draft202012Validator(schema, registry=registry).validate(instance)

    return validate


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
