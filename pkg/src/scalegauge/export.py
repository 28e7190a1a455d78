"""CSV/JSON writers.  Floats are written with ``repr`` so output bytes depend
only on the computed values."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .lattice_gauge import GaugeFields, LinkField, PathRecord


def site_label(site: Sequence[int]) -> str:
    return ":".join(str(int(i)) for i in site)


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def field_rows(gf: GaugeFields, links: LinkField):
    lat = gf.lattice
    for site in lat.sites():
        for mu in range(lat.ndim):
            z = links.forward[site + (mu,)]
            yield (site_label(site), mu, fmt(gf.A[site + (mu,)]), fmt(gf.B[site + (mu,)]), fmt(z.real), fmt(z.imag))


def write_fields_csv(path: Path, gf: GaugeFields, links: LinkField) -> None:
    write_csv(path, ("site", "axis", "A", "B", "link_re", "link_im"), field_rows(gf, links))


def write_paths_csv(path: Path, records: Iterable[PathRecord]) -> None:
    rows = (
        (r.path_id, site_label(r.endpoint), fmt(r.product.real), fmt(r.product.imag), fmt(r.log_defect))
        for r in records
    )
    write_csv(path, ("path_id", "endpoint", "product_re", "product_im", "log_defect"), rows)


def write_densities_csv(path: Path, densities: Iterable[tuple[Sequence[int], complex]]) -> None:
    rows = ((site_label(s), fmt(complex(v).real), fmt(complex(v).imag)) for s, v in densities)
    write_csv(path, ("site", "density_re", "density_im"), rows)


def _clean(obj):
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_json(path: Path, payload) -> None:
    text = json.dumps(_clean(payload), indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")
