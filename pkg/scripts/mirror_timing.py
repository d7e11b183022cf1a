"""Time the mirror comparison (dimensions and structure constants) for a range of k."""

import argparse
import time

from strandmirror.mirrorcheck import verify_mirror, verify_stop_complexes

p = argparse.ArgumentParser()
p.add_argument("--kmin", type=int, default=2)
p.add_argument("--kmax", type=int, default=5)
p.add_argument("--wmax", type=int, default=6)
args = p.parse_args()

total = 0.0
for k in range(args.kmin, args.kmax + 1):
    t = time.perf_counter()
    r = verify_mirror(k, args.wmax)
    for part in r["parts"]:
        print(f"k={k} {part['name']:28s} checked={part['checked']:>10d} mismatches={len(part['mismatches'])} {part['wall_time']:.1f}s")
    stop = verify_stop_complexes(k, args.wmax)
    print(f"k={k} {stop.summary()}")
    dt = time.perf_counter() - t
    total += dt
    print(f"k={k} {'PASS' if r['ok'] and stop.ok else 'FAIL'} in {dt:.1f}s", flush=True)
print(f"total {total:.1f}s")
