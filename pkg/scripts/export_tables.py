"""Write the A-side, B-side and interval tables, a DOT quiver and a cover table to a directory."""

import argparse
from pathlib import Path

from strandmirror.cli import main

p = argparse.ArgumentParser()
p.add_argument("--k", type=int, default=3)
p.add_argument("--wmax", type=int, default=4)
p.add_argument("--gamma", default="2")
p.add_argument("--phi")
p.add_argument("--dir", default="tables")
args = p.parse_args()



def default_phi(gamma, k):
    """Send every x_i to the generator of each factor in turn."""
    r = len(gamma.split(","))
    return ";".join(",".join("1" if j == i % r else "0" for j in range(r)) for i in range(k))


out = Path(args.dir)
out.mkdir(parents=True, exist_ok=True)
common = ["--k", str(args.k), "--wmax", str(args.wmax)]
jobs = {
    f"a_k{args.k}.json": ["algebra", "a", *common],
    f"b_k{args.k}.json": ["algebra", "b", *common],
    f"bcirc_k{args.k}.json": ["algebra", "b", "--initial", *common],
    f"b_k{args.k}.dot": ["algebra", "b", "--k", str(args.k), "--format", "dot"],
    f"cover_{args.gamma.replace(',', 'x')}_k{args.k}.json": ["cover", *common, "--gamma", args.gamma,
                                                             "--phi", args.phi or default_phi(args.gamma, args.k)],
}
status = 0
for name, argv in jobs.items():
    code = main(argv + ["--out", str(out / name)])
    print(f"{name}: exit {code}")
    status = max(status, code)
raise SystemExit(status)
