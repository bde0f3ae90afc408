#!/usr/bin/env python3
"""Regenerates the bundled scenario scripts in data/scenarios."""

import json
import random
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "scenarios"


def seg(start, length, kind, **extra):
    s = {"start": start, "end": start + length - 1, "kind": kind}
    s.update(extra)
    return s


def timeline(parts):
    """parts: list of (kind, length, extra-dict-or-callable(start))."""
    out, cursor = [], 0
    for kind, length, extra in parts:
        e = extra(cursor) if callable(extra) else dict(extra)
        out.append(seg(cursor, length, kind, **e))
        cursor += length
    return out


def write(name, description, segments, **fields):
    doc = {"name": name, "description": description}
    doc.update(fields)
    doc["segments"] = segments
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")


def delivery(start, release_off, span, distance, **extra):
    d = {"release": start + release_off, "bounce": start + release_off + span, "distance_m": distance}
    d.update(extra)
    return {"delivery": d}


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    write("one_delivery", "50 other-view frames, one 100-frame delivery shot, 50 other-view frames",
          timeline([("other", 50, {}),
                    ("front", 100, lambda s: delivery(s, 20, 20, 4.5)),
                    ("other", 50, {})]))

    write("delivery_plus_replay", "a live delivery shot followed by its replay without the scorecard",
          timeline([("other", 50, {}),
                    ("front", 100, lambda s: delivery(s, 20, 20, 7.0)),
                    ("other", 50, {}),
                    ("replay", 100, lambda s: delivery(s, 20, 20, 7.0)),
                    ("other", 50, {})]))

    write("good_length_7m", "one delivery bouncing 7.0 m from the batsman's stumps",
          timeline([("other", 50, {}),
                    ("front", 100, lambda s: delivery(s, 20, 20, 7.0, zoom=1.15,
                                                      bounce_batsman_bottom=290.0)),
                    ("other", 50, {})]))

    write("no_front", "other-view footage only",
          timeline([("other", 120, {}), ("other", 120, {})]))

    write("smooth_motion", "slow pans and a moving player without cuts inside each shot",
          timeline([("other", 200, {"pan": 1}),
                    ("front", 200, {"pan": 1}),
                    ("other", 200, {"pan": 1})]))

    write("no_ball", "a delivery shot where the ball is never detected",
          timeline([("other", 50, {}),
                    ("front", 100, {"objects": ["pitch", "umpire"]}),
                    ("other", 50, {})]))

    # Long broadcast where delivery shots make up 5% of all frames.
    parts, shots, frames, shot = [], 20, 24000, 60
    gap = (frames - shots * shot) // (shots + 1)
    rest = frames - shots * shot - gap * (shots + 1)
    for i in range(shots + 1):
        parts.append(("other", gap + (1 if i < rest else 0), {}))
        if i < shots:
            parts.append(("front", shot, lambda s: delivery(s, 15, 18, 7.0, ball_until=s + 41)))
    write("match_5pct", "24000 frames in which delivery shots cover 5% of the broadcast",
          timeline(parts), width=320, height=180)

    # 214 deliveries: 80 full, 85 good length, 49 short, kept clear of the
    # 6 m and 8 m class edges.
    rng = random.Random(214)
    distances = ([rng.uniform(2.0, 5.5) for _ in range(80)] +
                 [rng.uniform(6.4, 7.6) for _ in range(85)] +
                 [rng.uniform(8.5, 16.0) for _ in range(49)])
    rng.shuffle(distances)
    parts = []
    for i, dist in enumerate(distances):
        parts.append(("other", 40, {}))
        span = rng.randint(16, 22)
        release = rng.randint(10, 15)
        zoom = round(rng.uniform(1.0, 1.15), 3)
        bottom = round(rng.uniform(140.0, 146.0), 2)
        extra = {"zoom": zoom,
                 "batsman_bottom": bottom,
                 "bounce_batsman_bottom": round(bottom + rng.uniform(0.0, 6.0), 2),
                 "column": round(rng.uniform(140.0, 180.0), 2),
                 "decoys": i % 3 == 0}
        parts.append(("front", 60,
                      lambda s, r=release, sp=span, d=round(dist, 3), e=extra: delivery(s, r, sp, d, **e)))
    parts.append(("other", 40, {}))
    write("deliveries_214", "214 deliveries: 80 full, 85 good length, 49 short",
          timeline(parts), width=320, height=180, seed=214)

    return 0


if __name__ == "__main__":
    sys.exit(main())
