# Copyright 2026 The fmpc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plots tracking error, error derivative and input from an `fmpc run` directory."""

import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {key: [float(r[key]) for r in rows] for key in rows[0]}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dir", type=pathlib.Path)
    parser.add_argument("--output", type=pathlib.Path, default=None)
    args = parser.parse_args()

    runs = {name: load(args.run_dir / f"{name}.csv")
            for name in ("two_funnel", "one_funnel")
            if (args.run_dir / f"{name}.csv").exists()}
    if not runs:
        raise SystemExit(f"no run CSVs in {args.run_dir}")

    fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    first = next(iter(runs.values()))
    for ax, bound in ((axes[0], "psi0"), (axes[1], "psi1")):
        ax.plot(first["t"], first[bound], "k--", lw=1, label=bound)
        ax.plot(first["t"], [-v for v in first[bound]], "k--", lw=1)
    for name, data in runs.items():
        axes[0].plot(data["t"], data["e"], label=name)
        axes[1].plot(data["t"], data["edot"], label=name)
        axes[2].step(data["t"], data["u"], where="post", label=name)
    axes[0].set_ylabel("e")
    axes[1].set_ylabel("de/dt")
    axes[2].set_ylabel("u")
    axes[2].set_xlabel("t [s]")
    for ax in axes:
        ax.grid(True, alpha=0.3)
        ax.legend(loc="upper right")
    axes[0].set_ylim(-3.5, 3.5)
    axes[1].set_ylim(-7, 7)
    fig.tight_layout()
    out = args.output or args.run_dir / "tracking.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
