"""Command line entry point.

Stage commands (ingest, analyze, embed, index-images) validate and
report; bundle writes the full artifact directory; serve exposes a
saved bundle over HTTP; run is bundle followed by serve. Configuration
comes from an optional key=value file, and command line flags win over
file values.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sourcesift")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--strict", action="store_true", help="fail on any malformed input record")
    parser.add_argument("--seed", type=int, help="override embedding and community seeds")
    parser.add_argument("--threads", type=int, help="cap numeric library threads")
    parser.add_argument("--out", help="output directory (bundle, embed, generate-fixture)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log stage progress")

    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate-fixture", help="write the synthetic dataset")
    gen.add_argument("--out", dest="gen_out", help="fixture directory")
    gen.add_argument("--seed", dest="gen_seed", type=int, default=7)

    for name, help_text in [
        ("ingest", "parse and validate accounts and tweets"),
        ("analyze", "lexicon profiles, entities, graphs, communities"),
        ("embed", "train per-label embedding models"),
        ("index-images", "load and validate image vectors"),
        ("bundle", "run the full pipeline and save a bundle"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--source", required=True, help="source directory")

    serve = sub.add_parser("serve", help="serve a saved bundle over HTTP")
    serve.add_argument("--bundle", required=True, help="bundle directory")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--assets", help="directory of raw image files")
    serve.add_argument("--ui", help="directory of static frontend files")

    run = sub.add_parser("run", help="full pipeline, then serve the result")
    run.add_argument("--source", required=True)
    run.add_argument("--host", default="127.0.0.1")
    run.add_argument("--port", type=int, default=8000)
    run.add_argument("--no-serve", action="store_true", help="stop after saving the bundle")
    return parser


def _apply_thread_cap(threads: int | None) -> None:
    # Must happen before numpy is first imported to take effect.
    if threads is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(threads)


def _load_config(args: argparse.Namespace):
    from .pipeline import PipelineConfig, config_from_mapping, load_config_file

    if args.config:
        config = config_from_mapping(load_config_file(args.config))
    else:
        config = PipelineConfig()
    if args.strict:
        config.strict = True
    if args.seed is not None:
        import dataclasses

        config.embedding = dataclasses.replace(config.embedding, seed=args.seed)
        config.community_seed = args.seed
    return config


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    _apply_thread_cap(args.threads)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    stage = args.command
    try:
        if stage == "generate-fixture":
            from .fixture import generate_fixture

            out = args.gen_out or args.out
            if not out:
                print("generate-fixture needs --out", file=sys.stderr)
                return 2
            meta = generate_fixture(out, seed=args.gen_seed)
            print(
                f"fixture: {meta['counts']['accounts']} accounts, "
                f"{meta['counts']['tweets']} tweets, "
                f"{meta['counts']['images']} images -> {out}"
            )
            return 0

        from . import pipeline

        config = _load_config(args)

        if stage == "ingest":
            paths = pipeline.SourcePaths.discover(args.source)
            registry, corpus = pipeline.ingest(paths, strict=config.strict)
            print(f"ingest: {len(registry)} accounts, {len(corpus)} tweets, {corpus.skipped} skipped")
            return 0

        if stage == "analyze":
            paths = pipeline.SourcePaths.discover(args.source)
            _, corpus = pipeline.ingest(paths, strict=config.strict)
            analysis = pipeline.analyze(corpus, paths, config)
            communities = sorted(set(analysis.communities.membership.values()))
            print(
                f"analyze: {len(analysis.entity_index.counts)} entities, "
                f"{len(analysis.social.edges)} social edges, "
                f"{len(communities)} communities, "
                f"modularity {analysis.communities.modularity:.6f}"
            )
            return 0

        if stage == "embed":
            paths = pipeline.SourcePaths.discover(args.source)
            _, corpus = pipeline.ingest(paths, strict=config.strict)
            from .entities import load_gazetteer
            from .store import save_model_files

            gazetteer = load_gazetteer(paths.gazetteer, paths.blocklist)
            models = pipeline.embed(corpus, gazetteer, config)
            for label in sorted(models):
                print(f"embed[{label}]: vocab {len(models[label].vocab.tokens)}")
            if args.out:
                written = save_model_files(models, Path(args.out))
                for path in written:
                    print(f"wrote {path}")
            return 0

        if stage == "index-images":
            paths = pipeline.SourcePaths.discover(args.source)
            registry, _ = pipeline.ingest(paths, strict=config.strict)
            index = pipeline.index_images(paths, registry, strict=config.strict)
            by_label = {label: index.partition_size(label) for label in ("real", "suspicious")}
            print(
                f"index-images: {len(index.features)} vectors "
                f"(real {by_label['real']}, suspicious {by_label['suspicious']})"
            )
            return 0

        if stage == "bundle" or stage == "run":
            if stage == "bundle" and not args.out:
                print("bundle needs --out", file=sys.stderr)
                return 2
            out = args.out or str(Path(args.source).with_name(Path(args.source).name + "_bundle"))
            bundle = pipeline.run_pipeline(args.source, out, config)
            print(
                f"bundle: {len(bundle.corpus)} tweets, "
                f"{len(bundle.entity_index.counts)} entities, "
                f"fingerprint {bundle.manifest['fingerprint'][:12]} -> {out}"
            )
            if stage == "run" and not args.no_serve:
                from .service import create_app, serve as serve_app

                paths = pipeline.SourcePaths.discover(args.source)
                app = create_app(bundle, assets_dir=paths.assets)
                print(f"serving on http://{args.host}:{args.port}")
                serve_app(app, host=args.host, port=args.port)
            return 0

        if stage == "serve":
            from .store import load_bundle
            from .service import create_app, serve as serve_app

            bundle = load_bundle(args.bundle)
            assets = Path(args.assets) if args.assets else None
            ui = Path(args.ui) if args.ui else None
            app = create_app(bundle, assets_dir=assets, ui_dir=ui)
            print(f"serving {args.bundle} on http://{args.host}:{args.port}")
            serve_app(app, host=args.host, port=args.port)
            return 0

        raise AssertionError(f"unhandled command {stage!r}")
    except Exception as exc:  # noqa: BLE001 - single exit point names the stage
        print(f"error in {stage}: {exc}", file=sys.stderr)
        if args.verbose:
            raise
        return 1


if __name__ == "__main__":
    sys.exit(main())
