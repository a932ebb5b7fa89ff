import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

INSTANCES = Path(__file__).parent.parent / "src" / "presemiring" / "instances"


def instance(name: str) -> str:
    return str(INSTANCES / f"{name}.pres")
