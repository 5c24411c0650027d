"""Deterministic synthetic fixture: a GDELT-style CSV with known structure.

Events are drawn from a finite pool of "sites" (geocoded news collapses
onto city centroids, so duplicated coordinates are the norm, not the
exception). Each class owns a few spatial clusters of sites with
Zipf-like popularity, and a fixed fraction of rows gets a wrong label.
Same seed, same bytes: the generator is the reference input for the
experiment-grid acceptance run.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .events import IRAQ_BBOX, BoundingBox, EventClass

#: (label, weight, cluster centers, cluster sigma)
CLASS_LAYOUT = (
    (0, 0.320, ((36.30, 43.80), (36.90, 42.95), (34.10, 45.35)), 0.30),
    (73, 0.260, ((33.30, 44.35), (36.10, 43.95), (31.05, 46.25)), 0.45),
    (145, 0.075, ((33.32, 44.42), (35.55, 45.42)), 0.18),
    (194, 0.290, ((33.43, 43.28), (35.45, 44.38), (36.35, 41.90)), 0.35),
    (202, 0.055, ((35.50, 43.45), (34.05, 44.95)), 0.22),
)

SITES_PER_CLUSTER = 45

#: Actor1Type1Code fillers for rows that are not refugee events.
_OTHER_ACTOR_CODES = ("", "", "", "GOV", "MIL", "CVL", "OPP")

#: Event codes outside the studied set, used on refugee rows.
_BENIGN_EVENT_CODES = ("036", "042", "043", "046")


def _build_sites(rng: np.random.Generator, bbox: BoundingBox):
    """Per class: site coordinates (rounded to 0.01 degrees) and popularity."""
    sites = {}
    for label, _, centers, sigma in CLASS_LAYOUT:
        coords = []
        for lat_c, lon_c in centers:
            pts = rng.normal(
                loc=(lat_c, lon_c), scale=sigma, size=(SITES_PER_CLUSTER, 2)
            )
            pts[:, 0] = np.clip(pts[:, 0], bbox.lat_min + 0.02, bbox.lat_max - 0.02)
            pts[:, 1] = np.clip(pts[:, 1], bbox.lon_min + 0.02, bbox.lon_max - 0.02)
            coords.append(np.round(pts, 2))
        coords = np.concatenate(coords)
        ranks = np.arange(1, len(coords) + 1, dtype=np.float64)
        popularity = (1.0 / ranks) / (1.0 / ranks).sum()
        sites[label] = (coords, popularity)
    return sites


def generate_synthetic_csv(
    path,
    n: int = 40_000,
    seed: int = 42,
    noise: float = 0.25,
    bbox: BoundingBox = IRAQ_BBOX,
    invalid_rows: int = 0,
) -> dict:
    """Write a synthetic export to ``path`` and return generation stats.

    ``invalid_rows`` appends that many deliberately malformed rows (missing
    coordinates, bad years) for parser exercises; the default emits only
    clean rows so the point count after ingest equals ``n``.
    """
    if not (0.0 <= noise < 1.0):
        raise ValueError(f"noise must be in [0, 1), got {noise}")
    rng = np.random.default_rng(seed)
    labels = np.array([c[0] for c in CLASS_LAYOUT])
    weights = np.array([c[1] for c in CLASS_LAYOUT])
    weights = weights / weights.sum()
    sites = _build_sites(rng, bbox)

    true_class = rng.choice(labels, size=n, p=weights)
    coords = np.empty((n, 2))
    for label in labels:
        mask = true_class == label
        site_coords, popularity = sites[label]
        picks = rng.choice(len(site_coords), size=int(mask.sum()), p=popularity)
        coords[mask] = site_coords[picks]

    flip = rng.random(n) < noise
    observed = true_class.copy()
    for label in labels:
        mask = flip & (true_class == label)
        others = labels[labels != label]
        observed[mask] = rng.choice(others, size=int(mask.sum()))

    years = rng.integers(2012, 2016, size=n)
    actor_pick = rng.integers(0, len(_OTHER_ACTOR_CODES), size=n)
    benign_pick = rng.integers(0, len(_BENIGN_EVENT_CODES), size=n)
    # about 1% of refugee rows also carry a studied event code, to exercise
    # the precedence rule and its collision counter
    collision = rng.random(n) < 0.01
    collision_code = rng.choice(
        [ec.code for ec in EventClass if ec is not EventClass.REFUGEES], size=n
    )

    buf = io.StringIO()
    buf.write(
        "GLOBALEVENTID,Actor1Type1Code,Year,ActionGeo_CountryCode,"
        "Actor1Geo_Lat,Actor1Geo_Long,EventCode\n"
    )
    for i in range(n):
        label = int(observed[i])
        if label == 0:
            actor = "REF"
            event_code = collision_code[i] if collision[i] else _BENIGN_EVENT_CODES[benign_pick[i]]
        else:
            actor = _OTHER_ACTOR_CODES[actor_pick[i]]
            event_code = EventClass.from_label(label).code
        buf.write(
            f"{100000 + i},{actor},{years[i]},IZ,"
            f"{coords[i, 0]:.2f},{coords[i, 1]:.2f},{event_code}\n"
        )

    for j in range(invalid_rows):
        kind = j % 3
        if kind == 0:
            buf.write(f"{900000 + j},REF,2013,IZ,,44.01,073\n")  # missing latitude
        elif kind == 1:
            buf.write(f"{900000 + j},,notayear,IZ,33.30,44.35,145\n")
        else:
            buf.write(f"{900000 + j},GOV,2014,IZ,33.30,,194\n")  # missing longitude

    Path(path).write_text(buf.getvalue(), encoding="utf-8")

    values, counts = np.unique(observed, return_counts=True)
    return {
        "n": n,
        "seed": seed,
        "noise": noise,
        "flipped": int(flip.sum()),
        "class_counts": {int(v): int(c) for v, c in zip(values, counts)},
        "invalid_rows": invalid_rows,
    }
