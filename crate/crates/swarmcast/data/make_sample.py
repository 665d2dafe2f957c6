"""Builds sensex_monthly.csv.

The first six rows (Jun11-Nov11) and the last row (Dec14) are real
BSE SENSEX monthly values. The 36 months in between are synthetic: a seeded
log-space Brownian bridge from the Nov11 close to the Dec14 open, with
high/low wicks around each open/close pair. Rerunning reproduces the file.
"""
import math
import random

KNOWN_HEAD = [
    ("Jun11", 19859.22, 19860.19, 18467.16, 19395.81),
    ("Jul11", 19352.48, 20351.06, 19126.82, 19345.70),
    ("Aug11", 19443.29, 19569.20, 17448.71, 18619.72),
    ("Sept11", 18691.83, 20739.69, 18166.17, 19379.77),
    ("Oct11", 19452.05, 21205.44, 19264.72, 21164.52),
    ("Nov11", 21158.81, 21321.53, 20137.67, 20791.93),
]
KNOWN_TAIL = ("Dec14", 20771.27, 21483.74, 20568.70, 21170.68)
MONTHS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sept", "Oct", "Nov", "Dec"]


def labels():
    year, month = 2011, 11  # December 2011, zero-based month index
    for _ in range(36):
        yield f"{MONTHS[month]}{year % 100:02d}"
        month += 1
        if month == 12:
            year, month = year + 1, 0


def main():
    rng = random.Random(20141227)
    n = 36
    start = math.log(KNOWN_HEAD[-1][4])
    end = math.log(KNOWN_TAIL[1])
    vol = 0.035
    # Brownian bridge over n + 1 steps ending at the Dec14 open
    walk = [0.0]
    for _ in range(n + 1):
        walk.append(walk[-1] + rng.gauss(0.0, vol))
    bridge = [start + w - (i / (n + 1)) * (walk[-1] - (end - start)) for i, w in enumerate(walk)]

    rows = list(KNOWN_HEAD)
    prev_close = KNOWN_HEAD[-1][4]
    for i, label in enumerate(labels(), start=1):
        open_ = prev_close * math.exp(rng.gauss(0.0, 0.004))
        close = math.exp(bridge[i])
        high = max(open_, close) * (1.0 + abs(rng.gauss(0.0, 0.015)))
        low = min(open_, close) * (1.0 - abs(rng.gauss(0.0, 0.015)))
        rows.append((label, open_, high, low, close))
        prev_close = close
    rows.append(KNOWN_TAIL)

    with open("sensex_monthly.csv", "w", newline="\n") as f:
        f.write("Month,Open,High,Low,Close\n")
        for label, o, h, l, c in rows:
            f.write(f"{label},{o:.2f},{h:.2f},{l:.2f},{c:.2f}\n")


if __name__ == "__main__":
    main()
