#!/usr/bin/env python3
"""Regenerate both coupling-map artifacts (point-sphere and volume-averaged).

Each map lands in its own subdirectory with a manifest, so reruns are
comparable checksum-for-checksum.
"""

import argparse
import os

from magsqueeze.config import load_config
from magsqueeze.scenarios import ScenarioConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None, metavar="PATH")
    ap.add_argument("--out", default="out/coupling", metavar="DIR")
    args = ap.parse_args()

    for scenario, sub in (("coupling_map_a", "point"), ("coupling_map_b", "volume")):
        cfg = load_config(args.config)
        cfg.run.output_dir = os.path.join(args.out, sub)
        manifest = run(ScenarioConfig.from_config(cfg, scenario=scenario))
        for entry in manifest.outputs:
            print(f"{scenario}: {cfg.run.output_dir}/{entry['path']}")


if __name__ == "__main__":
    main()
