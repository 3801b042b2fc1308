"""Regenerate openapi.json from the service app."""
import json
from pathlib import Path

from sgt.motionlib import MotionLibrary
from sgt.service import create_app


def main():
    app = create_app(model=None, data_dir=None, library=MotionLibrary.default())
    out = Path(__file__).resolve().parents[1] / "openapi.json"
    with open(out, "w") as f:
        json.dump(app.openapi(), f, indent=1, sort_keys=True)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
