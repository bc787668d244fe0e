"""Umbrella command line: dataset preparation, training, generation,
postprocessing, evaluation and the HTTP service."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

log = logging.getLogger("uidiff")


def _add_synth_data(sub):
    p = sub.add_parser("synth-data", help="generate a synthetic Rico-convention dataset")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--n", type=int, default=200, help="portrait records")
    p.add_argument("--landscape", type=int, default=0, help="landscape records (rejected later)")
    p.add_argument("--seed", type=int, default=0)

    def run(args):
        from .rico import generate_synthetic_dataset

        ids = generate_synthetic_dataset(args.out, args.n, args.landscape, args.seed)
        print(f"wrote {len(ids)} records under {args.out}")

    p.set_defaults(func=run)


def _add_ingest(sub):
    p = sub.add_parser("ingest", help="preprocess a Rico-convention dataset into a manifest")
    p.add_argument("--root", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)

    def run(args):
        from .rico import IngestConfig, build_training_set, scan_rico_root

        records = scan_rico_root(args.root)
        manifest, stats = build_training_set(records, IngestConfig(out_dir=args.out, seed=args.seed))
        print(f"manifest: {manifest}")
        print(f"kept {stats.kept}, rejected {dict(stats.rejected)}")

    p.set_defaults(func=run)


def _add_train_layout(sub):
    p = sub.add_parser("train-layout", help="train the discrete layout diffusion model")
    p.add_argument("--data", required=True, type=Path, help="manifest.jsonl")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("layout.ckpt"))
    p.add_argument("--batch", type=int, default=8)
    p.add_argument("--lr", type=float, default=3e-4)
    p.add_argument("--layers", type=int, default=4)
    p.add_argument("--width", type=int, default=128)

    def run(args):
        from .core import TokenizerConfig, tokenize_layout
        from .layout_diffusion import (
            DenoiserConfig,
            DiscreteSchedule,
            LayoutDenoiser,
            LayoutDiffusionTrainer,
            LayoutTrainConfig,
            save_layout_checkpoint,
        )
        from .rico import read_manifest

        entries = [e for e in read_manifest(args.data) if e.layout is not None]
        if not entries:
            sys.exit("manifest has no layouts")
        cfg = TokenizerConfig()
        seqs = [tokenize_layout(e.layout, cfg) for e in entries]
        model = LayoutDenoiser(
            cfg, DenoiserConfig(layers=args.layers, width=args.width), seed=args.seed
        )
        schedule = DiscreteSchedule()
        trainer = LayoutDiffusionTrainer(
            model,
            schedule,
            LayoutTrainConfig(batch_size=args.batch, learning_rate=args.lr, seed=args.seed),
        )
        losses = trainer.train(seqs, steps=args.steps)
        save_layout_checkpoint(model, schedule, args.out)
        print(f"trained {args.steps} steps on {len(seqs)} layouts; final loss {losses[-1]:.4f}")
        print(f"checkpoint: {args.out}")

    p.set_defaults(func=run)


def _add_gen_layout(sub):
    p = sub.add_parser("gen-layout", help="sample a layout for a component list")
    p.add_argument("--components", default="", help='e.g. "text button:2,toolbar:1"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("layout.json"))
    p.add_argument("--ckpt", required=True, type=Path)
    p.add_argument("--wireframe", type=Path, help="also render the wireframe PNG here")
    p.add_argument("--allow-untrained", action="store_true")

    def run(args):
        from .core import layout_to_json
        from .layout_diffusion import ComponentCondition, load_layout_checkpoint, sample
        from .wireframe import DEFAULT_PALETTE, render_wireframe, save_png

        model, schedule = load_layout_checkpoint(args.ckpt)
        condition = ComponentCondition.from_string(args.components) if args.components else None
        layout = sample(
            model,
            schedule,
            condition,
            np.random.default_rng(args.seed),
            allow_untrained=args.allow_untrained,
        )
        args.out.write_text(layout_to_json(layout))
        print(f"layout with {len(layout.elements)} elements: {args.out}")
        if args.wireframe:
            save_png(render_wireframe(layout, DEFAULT_PALETTE), args.wireframe)
            print(f"wireframe: {args.wireframe}")

    p.set_defaults(func=run)


def _add_pretrain_base(sub):
    p = sub.add_parser("pretrain-base", help="pretrain the toy frozen components")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--out", type=Path, default=Path("base.ckpt"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--text-steps", type=int, default=300)
    p.add_argument("--codec-steps", type=int, default=600)
    p.add_argument("--base-steps", type=int, default=600)
    p.add_argument("--unet-base", type=int, default=32)

    def run(args):
        from .rico import read_manifest
        from .ui_diffusion import ToyTrainConfig, UNetConfig, build_toy_components, save_ui_checkpoint

        entries = read_manifest(args.data)
        components, logs = build_toy_components(
            entries,
            ToyTrainConfig(
                text_steps=args.text_steps,
                codec_steps=args.codec_steps,
                base_steps=args.base_steps,
                unet=UNetConfig(base=args.unet_base),
                seed=args.seed,
            ),
        )
        save_ui_checkpoint(components, args.out)
        print(
            "pretrained toy components "
            f"(codec loss {logs['codec'][-1]:.4f}, base loss {logs['base'][-1]:.4f}): {args.out}"
        )

    p.set_defaults(func=run)


def _add_train_ui(sub):
    p = sub.add_parser("train-ui", help="fine-tune the control branch")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--profile", choices=("toy", "pretrained"), default="toy")
    p.add_argument("--base", type=Path, help="existing base checkpoint to start from")
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--batch", type=int, default=4)
    p.add_argument("--lr", type=float, default=1e-5)
    p.add_argument("--prompt-dropout", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--out", type=Path, default=Path("ui.ckpt"))
    p.add_argument("--log", type=Path, help="write the per-step loss log as JSON")
    p.add_argument("--base-steps", type=int, default=600)
    p.add_argument("--codec-steps", type=int, default=600)
    p.add_argument("--text-steps", type=int, default=300)

    def run(args):
        from .rico import read_manifest
        from .ui_diffusion import (
            FinetuneConfig,
            ToyTrainConfig,
            build_toy_components,
            finetune_control,
            load_ui_checkpoint,
            save_ui_checkpoint,
        )

        entries = read_manifest(args.data)
        if args.base is not None:
            components = load_ui_checkpoint(args.base)
        elif args.profile == "toy":
            components, _ = build_toy_components(
                entries,
                ToyTrainConfig(
                    text_steps=args.text_steps,
                    codec_steps=args.codec_steps,
                    base_steps=args.base_steps,
                    seed=args.seed,
                ),
            )
        else:
            sys.exit(
                "profile=pretrained requires --base pointing at an externally "
                "provided checkpoint (production weights are not bundled)"
            )
        losses = finetune_control(
            entries,
            components,
            FinetuneConfig(
                epochs=args.epochs,
                batch_size=args.batch,
                learning_rate=args.lr,
                prompt_dropout=args.prompt_dropout,
                seed=args.seed,
                max_steps=args.max_steps,
            ),
        )
        save_ui_checkpoint(components, args.out)
        if args.log:
            args.log.write_text(json.dumps(losses))
        print(f"fine-tuned {len(losses)} steps; final MSE {losses[-1]:.5f}")
        print(f"checkpoint: {args.out}")

    p.set_defaults(func=run)


def _add_gen_ui(sub):
    p = sub.add_parser("gen-ui", help="generate a UI image from a layout and prompt")
    p.add_argument("--prompt", default="")
    p.add_argument("--layout", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", type=Path, default=Path("ui.png"))
    p.add_argument("--ckpt", required=True, type=Path)

    def run(args):
        from .core import layout_from_json
        from .ui_diffusion import generate_ui, load_ui_checkpoint
        from .wireframe import save_png

        components = load_ui_checkpoint(args.ckpt)
        layout = layout_from_json(args.layout.read_text())
        image = generate_ui(components, args.prompt, layout, seed=args.seed, steps=args.steps)
        save_png(image, args.out)
        print(f"ui image: {args.out}")

    p.set_defaults(func=run)


def _add_crop(sub):
    p = sub.add_parser("crop", help="crop components out of a generated UI")
    p.add_argument("--ui", required=True, type=Path)
    p.add_argument("--layout", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)

    def run(args):
        from .core import layout_from_json
        from .postprocess import crop_components
        from .wireframe import load_png, save_png

        layout = layout_from_json(args.layout.read_text())
        crops = crop_components(load_png(args.ui), layout)
        args.out.mkdir(parents=True, exist_ok=True)
        index = []
        for i, crop in enumerate(crops):
            name = f"{i:02d}_{crop.category.name.replace(' ', '_').replace('/', '-')}.png"
            save_png(crop.image, args.out / name)
            index.append(
                {
                    "file": name,
                    "category": crop.category.name,
                    "rect": list(crop.rect),
                    "occluded_fraction": crop.occluded_fraction,
                    "fill_color": list(crop.fill_color) if crop.fill_color else None,
                }
            )
        (args.out / "crops.json").write_text(json.dumps(index, indent=2))
        print(f"{len(crops)} crops under {args.out}")

    p.set_defaults(func=run)


def _add_codegen(sub):
    p = sub.add_parser("codegen", help="emit GUI code for a layout")
    p.add_argument("--layout", required=True, type=Path)
    p.add_argument("--ui", type=Path)
    p.add_argument("--format", choices=("xml", "html"), default="xml")
    p.add_argument("--out", required=True, type=Path)

    def run(args):
        from .core import layout_from_json
        from .postprocess import emit_html, emit_xml, generate_code
        from .wireframe import load_png

        layout = layout_from_json(args.layout.read_text())
        ui = load_png(args.ui) if args.ui else None
        doc = generate_code(layout, ui)
        text = emit_xml(doc) if args.format == "xml" else emit_html(doc)
        args.out.write_text(text)
        print(f"{args.format} with {len(doc.nodes)} nodes: {args.out}")

    p.set_defaults(func=run)


def _add_eval(sub):
    p = sub.add_parser("eval", help="evaluate generated results against requests")
    p.add_argument("--requests", required=True, type=Path, help="jsonl: id, prompt, components")
    p.add_argument("--results", required=True, type=Path, help="jsonl: id, image, layout")
    p.add_argument("--out", type=Path, default=Path("report.json"))
    p.add_argument("--backend", choices=("mock", "none"), default="mock")
    p.add_argument("--seed", type=int, default=0)

    def run(args):
        from .core import layout_from_dict, layout_from_json
        from .evalsuite import (
            CompatibilityScorer,
            EvalRequest,
            EvalResult,
            SeededMockBackend,
            evaluate_batch,
            write_report,
        )
        from .layout_diffusion import ComponentCondition
        from .wireframe import load_png

        requests = []
        for line in args.requests.read_text().splitlines():
            if not line.strip():
                continue
            data = json.loads(line)
            requests.append(
                EvalRequest(
                    data["id"], data.get("prompt", ""),
                    ComponentCondition.of(data.get("components", {})),
                )
            )
        results = []
        base = args.results.parent
        for line in args.results.read_text().splitlines():
            if not line.strip():
                continue
            data = json.loads(line)
            layout = (
                layout_from_dict(data["layout"])
                if isinstance(data["layout"], dict)
                else layout_from_json((base / data["layout"]).read_text())
            )
            image = load_png(base / data["image"]) if data.get("image") else None
            results.append(EvalResult(data["id"], image, layout))
        scorer = (
            CompatibilityScorer(SeededMockBackend(seed=args.seed))
            if args.backend == "mock"
            else None
        )
        report = evaluate_batch(requests, results, scorer)
        write_report(report, args.out)
        print(report.table())
        print(f"report: {args.out}")

    p.set_defaults(func=run)


def _add_palette(sub):
    p = sub.add_parser("palette", help="write the category palette as JSON")
    p.add_argument("--out", type=Path, default=Path("palette.json"))

    def run(args):
        from .wireframe import DEFAULT_PALETTE

        DEFAULT_PALETTE.write_json(args.out)
        print(f"palette: {args.out}")

    p.set_defaults(func=run)


def _add_serve(sub):
    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", type=Path, help="store root (or env UIDIFF_STORE)")
    p.add_argument("--layout-ckpt", type=Path)
    p.add_argument("--ui-ckpt", type=Path)
    p.add_argument("--frontend", type=Path, help="static frontend bundle served at /app")
    p.add_argument("--workers", type=int, default=1)

    def run(args):
        import uvicorn

        from .service.app import create_app

        app = create_app(
            store_root=args.store,
            layout_ckpt=args.layout_ckpt,
            ui_ckpt=args.ui_ckpt,
            workers=args.workers,
            frontend_dir=args.frontend,
        )
        uvicorn.run(app, host=args.host, port=args.port)

    p.set_defaults(func=run)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uidiff",
        description="Mobile UI prototyping: layouts from component lists, "
        "UI images from layouts and prompts, crops and GUI code from results.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for add in (
        _add_synth_data,
        _add_ingest,
        _add_train_layout,
        _add_gen_layout,
        _add_pretrain_base,
        _add_train_ui,
        _add_gen_ui,
        _add_crop,
        _add_codegen,
        _add_eval,
        _add_palette,
        _add_serve,
    ):
        add(sub)
    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    args.func(args)


if __name__ == "__main__":
    main()
