"""Command line entry points.

    cabotage ingest coast|gazetteer|pointcalls <path> [...]
    cabotage route compute --from <id|lon,lat> --to <id|lon,lat> --coast <path> [...]
    cabotage itinerary build --ship <id> --gazetteer <p> --pointcalls <p> [...]
    cabotage serve --coast <p> --gazetteer <p> --pointcalls <p> --port <n>

Exit code 0 on success, 2 on validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import geojson
from .errors import CabotageError
from .geo import CoastIndex, GeoPoint
from .ingest import RouteCache, load_coastline, load_gazetteer, load_pointcalls
from .pathfinder import RouteParams, compute_sea_route, route_between_stops
from .service import Corpus, Router, create_app

EXIT_VALIDATION = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cabotage")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="load and validate a dataset")
    ingest.add_argument("kind", choices=["coast", "gazetteer", "pointcalls"])
    ingest.add_argument("path")
    ingest.add_argument("--min-island-area", type=float, default=1.0,
                        metavar="KM2")
    ingest.add_argument("--gazetteer", help="gazetteer CSV (pointcalls only)")
    ingest.add_argument("--report", help="write the validation report here")

    route = sub.add_parser("route", help="sea-route computation")
    route_sub = route.add_subparsers(dest="route_command", required=True)
    compute = route_sub.add_parser("compute")
    compute.add_argument("--from", dest="from_", required=True,
                         metavar="ID|LON,LAT")
    compute.add_argument("--to", required=True, metavar="ID|LON,LAT")
    compute.add_argument("--coast", required=True)
    compute.add_argument("--gazetteer")
    compute.add_argument("--offset", type=float)
    compute.add_argument("--spacing", type=float)
    compute.add_argument("--seed", type=int, default=0)
    compute.add_argument("--min-island-area", type=float, default=1.0)
    compute.add_argument("--out", help="write the GeoJSON feature here")

    itinerary = sub.add_parser("itinerary", help="qualified itineraries")
    it_sub = itinerary.add_subparsers(dest="itinerary_command", required=True)
    build = it_sub.add_parser("build")
    build.add_argument("--ship", required=True)
    build.add_argument("--gazetteer", required=True)
    build.add_argument("--pointcalls", required=True)
    build.add_argument("--coast")
    build.add_argument("--cache")
    build.add_argument("--out", required=True)
    qualify = it_sub.add_parser(
        "qualify", help="export qualified segments as JSON lines")
    qualify.add_argument("--ship", help="restrict to one ship id")
    qualify.add_argument("--gazetteer", required=True)
    qualify.add_argument("--pointcalls", required=True)
    qualify.add_argument("--out", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--coast")
    serve.add_argument("--gazetteer", required=True)
    serve.add_argument("--pointcalls", required=True)
    serve.add_argument("--cache")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")

    return parser


def _resolve_endpoint(text: str, gazetteer) -> GeoPoint:
    if "," in text:
        lon_s, lat_s = text.split(",", 1)
        return GeoPoint(float(lon_s), float(lat_s))
    if gazetteer is None or text not in gazetteer:
        raise CabotageError(f"cannot resolve {text!r}: pass --gazetteer or lon,lat")
    entry = gazetteer[text]
    return GeoPoint(entry.lon, entry.lat)


def _cmd_ingest(args) -> int:
    if args.kind == "coast":
        index, report = load_coastline(args.path, args.min_island_area)
        payload = {
            "polygon_count": report.polygon_count,
            "filtered_count": report.filtered_count,
            "fingerprint": report.fingerprint.content_hash,
            "resolution": report.fingerprint.resolution,
        }
    elif args.kind == "gazetteer":
        entries = load_gazetteer(args.path)
        payload = {"entries": len(entries)}
    else:
        if not args.gazetteer:
            print("ingest pointcalls requires --gazetteer", file=sys.stderr)
            return EXIT_VALIDATION
        gazetteer = load_gazetteer(args.gazetteer)
        _, report = load_pointcalls(args.path, gazetteer)
        payload = {
            "total_rows": report.total_rows,
            "loaded": report.loaded,
            "quarantined": [{"row": r, "reason": why}
                            for r, why in report.quarantined],
        }
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if args.report:
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_route_compute(args) -> int:
    index, _ = load_coastline(args.coast, args.min_island_area)
    gazetteer = load_gazetteer(args.gazetteer) if args.gazetteer else None
    src = _resolve_endpoint(args.from_, gazetteer)
    dst = _resolve_endpoint(args.to, gazetteer)
    params = RouteParams(rng_seed=args.seed,
                         min_island_area_km2=args.min_island_area)
    if args.offset is not None or args.spacing is not None:
        params = RouteParams(
            offset_km=args.offset if args.offset is not None else params.offset_km,
            spacing_km=args.spacing if args.spacing is not None else params.spacing_km,
            rng_seed=args.seed,
            min_island_area_km2=args.min_island_area,
            auto_adapt=False,
        )
    result = compute_sea_route(src, dst, index, params)
    doc = geojson.route_feature(result)
    text = geojson.dumps(doc)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    print(f"points={result.point_count} offset={result.offset_used_km}km "
          f"spacing={result.spacing_used_km}km "
          f"duration={result.duration_ms:.1f}ms", file=sys.stderr)
    return 0


def _load_corpus(args):
    gazetteer = load_gazetteer(args.gazetteer)
    records, report = load_pointcalls(args.pointcalls, gazetteer)
    if report.quarantined:
        print(f"{len(report.quarantined)} rows quarantined", file=sys.stderr)
    corpus = Corpus(gazetteer, records)
    if args.coast:
        index, _ = load_coastline(args.coast)
    else:
        index = CoastIndex([])
    cache = RouteCache(args.cache) if getattr(args, "cache", None) else None
    router = Router(index, gazetteer, cache)
    return corpus, router


def _cmd_itinerary_build(args) -> int:
    from .service import get_itinerary

    corpus, router = _load_corpus(args)
    doc = get_itinerary(corpus, args.ship, router=router)
    Path(args.out).write_text(geojson.dumps(doc) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def _cmd_itinerary_qualify(args) -> int:
    from .errors import UnknownShip
    from .itinerary import segment_record
    from .service import Corpus

    gazetteer = load_gazetteer(args.gazetteer)
    records, report = load_pointcalls(args.pointcalls, gazetteer)
    if report.quarantined:
        print(f"{len(report.quarantined)} rows quarantined", file=sys.stderr)
    corpus = Corpus(gazetteer, records)
    if args.ship:
        if args.ship not in corpus.ships:
            raise UnknownShip(f"unknown ship {args.ship!r}")
        views = [corpus.ships[args.ship]]
    else:
        views = list(corpus.ships.values())
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for view in views:
            for segment in view.segments:
                fh.write(json.dumps(segment_record(segment),
                                    ensure_ascii=False, sort_keys=True) + "\n")
    stats = corpus.stats()
    print(f"wrote {args.out}: {stats['segments']} segments, "
          f"{stats['inferred_segments']} inferred "
          f"({stats['inferred_share'] * 100:.1f}%)")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    corpus, router = _load_corpus(args)
    app = create_app(corpus, router)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "route":
            return _cmd_route_compute(args)
        if args.command == "itinerary":
            if args.itinerary_command == "qualify":
                return _cmd_itinerary_qualify(args)
            return _cmd_itinerary_build(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except CabotageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
