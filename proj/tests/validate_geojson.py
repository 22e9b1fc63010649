"""Runs the coverage command and checks the GeoJSON it writes with shapely."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from shapely.geometry import shape


def main() -> int:
    cli, scenario = sys.argv[1], sys.argv[2]
    with tempfile.TemporaryDirectory() as tmp:
        csv_path = Path(tmp) / "cov.csv"
        geojson_path = Path(tmp) / "cov.geojson"
        subprocess.run(
            [cli, "coverage", "--scenario", scenario, "--out", str(csv_path), "--geojson", str(geojson_path)],
            check=True,
        )
        collection = json.loads(geojson_path.read_text())
        rows = csv_path.read_text().splitlines()[1:]

    covered = sum(1 for row in rows if row.endswith(",1"))
    features = collection["features"]
    assert collection["type"] == "FeatureCollection"
    assert len(features) == covered, f"{len(features)} features for {covered} covered cells"
    assert covered > 0, "scenario covers nothing"
    for feature in features:
        ring = feature["geometry"]["coordinates"][0]
        assert ring[0] == ring[-1], "ring not closed"
        polygon = shape(feature["geometry"])
        assert polygon.is_valid, f"invalid polygon {ring}"
        assert polygon.exterior.is_ccw, "exterior ring is clockwise"
        assert polygon.area > 0.0
    print(f"{len(features)} valid polygons")
    return 0


if __name__ == "__main__":
    sys.exit(main())
