"""Command line: quiver, cocycle, verify and volume subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bd_complex import c3_element, c3_to_bd
from .bloch import Triangulated3Complex, boundary_w_value, delta_value, motivic_volume, numeric_volume_element
from .cluster_seed import c1_element, c2_element, triangle_seed
from .dilog import volume_real
from .flags_sl import DecoratedFlag
from .quiver import build_triangle_quiver, export_dot
from .root_system import WeylWord, cartan_data, longest_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {"type": "A", "rank": 1, "word": None, "seed": 0, "trials": None, "out": ".",
            "only": None, "torsion_mode": "drop"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    type: str
    rank: int
    word: str | None
    seed: int
    trials: int | None
    out: str
    only: str | None
    torsion_mode: str

    def __post_init__(self) -> None:
        if self.trials is not None and self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if self.torsion_mode not in ("drop", "keep"):
            raise UsageError("--torsion-mode is drop or keep")

    def cartan(self):
        try:
            return cartan_data(self.type, self.rank)
        except (ValueError, KeyError) as e:
            raise UsageError(str(e)) from e

    def weyl_word(self, cd) -> WeylWord:
        try:
            return longest_word(cd, WeylWord.parse(self.word) if self.word else None)
        except ValueError as e:
            raise UsageError(str(e)) from e


def read_config_file(path: str) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key}")
        out[key] = value
    return out


def resolve(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        merged["rank"] = int(merged["rank"])
        merged["seed"] = int(merged["seed"])
        merged["trials"] = None if merged["trials"] in (None, "") else int(merged["trials"])
    except ValueError as e:
        raise UsageError(f"bad numeric setting: {e}") from e
    merged["type"] = str(merged["type"]).upper()
    return RunConfig(**merged)


def _outdir(cfg: RunConfig) -> Path:
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cmd_quiver(cfg: RunConfig) -> int:
    cd = cfg.cartan()
    word = cfg.weyl_word(cd)
    q = build_triangle_quiver(cd, word)
    stem = f"quiver_{cd.label}_{''.join(map(str, word.letters))}"
    out = _outdir(cfg)
    (out / f"{stem}.json").write_text(q.to_json())
    (out / f"{stem}.dot").write_text(export_dot(q, f"Q_{cd.label}"))
    print(f"{cd.label} word {word}: {len(q)} vertices, {len(q.unfrozen())} unfrozen")
    print(f"wrote {out / stem}.json and .dot")
    return EXIT_OK


def cmd_cocycle(cfg: RunConfig) -> int:
    cd = cfg.cartan()
    word = cfg.weyl_word(cd)
    lines = [f"# {cd.label} word {word}", "", "[C2] W of the triangle seed (1,2,3)"]
    seed = triangle_seed(cd, word)
    lines += [f"{c} * {a} ^ {b}" for a, b, c in c2_element(cd, word).terms()]
    lines += ["", "[C3] divisor characters (weights Lambda_1..Lambda_r)"] + c3_element(cd).table()
    m = c3_to_bd(cd)
    lines += ["", "[C3 -> X_sc (x) X]"] + [" ".join(str(x) for x in row) for row in m]
    if cd.series == "A" and cd.rank <= 2:
        from .bloch import conf4_path

        _, path = conf4_path(cd.series, cd.rank, tuple(word.letters))
        lines += ["", "[C1] flip c24 -> c13"]
        if path is None:
            lines.append("no mutation path found")
        else:
            lines.append(f"path {' '.join(path.vertices)}")
            lines += [f"{c} * {{{x}}}" for x, c in c1_element(path).terms()]
    lines += ["", "[labels]"] + [f"{v.id} {lab}" for v, lab in zip(seed.quiver.vertices, seed.labels)]
    text = "\n".join(lines) + "\n"
    target = _outdir(cfg) / f"cocycle_{cd.label}_{''.join(map(str, word.letters))}.txt"
    target.write_text(text)
    print(text, end="")
    print(f"wrote {target}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import CRITERIA, run_suite

    only = {x.strip() for x in cfg.only.split(",")} if cfg.only else None
    if only:
        known = {c.key for c in CRITERIA} | {str(i) for i in range(1, len(CRITERIA) + 1)}
        if only - known:
            raise UsageError(f"unknown criteria {sorted(only - known)}; choose from {[c.key for c in CRITERIA]}")
    outcomes = run_suite(only, cfg.seed, cfg.torsion_mode, cfg.trials)
    report = [o.line() for o in outcomes]
    passed = sum(o.passed for o in outcomes)
    report.append(f"{passed}/{len(outcomes)} passed")
    print("\n".join(report))
    if cfg.out != ".":
        doc = [{"index": o.index, "key": o.criterion.key, "passed": o.passed, "trials": o.report.trials,
                "details": o.report.details} for o in outcomes]
        (_outdir(cfg) / "verify.json").write_text(json.dumps(doc, indent=1))
    return EXIT_OK if passed == len(outcomes) else EXIT_FAIL


def _component(x) -> Fraction | complex:
    if isinstance(x, list):
        if len(x) != 2:
            raise UsageError(f"complex entries are [re, im], got {x}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, float):
        return complex(x)
    return Fraction(x)


def load_triangulation(path: str) -> tuple[Triangulated3Complex, dict]:
    try:
        doc = json.loads(Path(path).read_text())
        tets = tuple((tuple(int(v) for v in quad), int(sgn)) for quad, sgn in doc["tetrahedra"])
        vectors = {int(k): tuple(_component(x) for x in v) for k, v in doc["vectors"].items()}
    except (OSError, KeyError, TypeError, ValueError) as e:
        raise UsageError(f"cannot read triangulation {path}: {e}") from e
    m3 = Triangulated3Complex(tets)
    if any(len(q) != 4 or len(set(q)) != 4 for q, _ in tets):
        raise UsageError("each tetrahedron needs four distinct vertices")
    missing = {v for q, _ in tets for v in q} - set(vectors)
    if missing:
        raise UsageError(f"no vectors for vertices {sorted(missing)}")
    if sorted(vectors) != list(range(1, len(vectors) + 1)):
        raise UsageError("vertex ids must be 1..N")
    try:
        m3.validate()
    except ValueError as e:
        raise UsageError(f"malformed gluing: {e}") from e
    return m3, vectors


def cmd_volume(cfg: RunConfig, path: str) -> int:
    m3, vectors = load_triangulation(path)
    b = numeric_volume_element(m3, vectors)
    print(f"motivic volume: {b}")
    print(f"volume (sum of D): {volume_real(b):.12f}")
    bnd = m3.boundary()
    print(f"boundary faces: {len(bnd)}")
    if all(isinstance(x, Fraction) for v in vectors.values() for x in v):
        cd = cartan_data("A", 1)
        word = longest_word(cd)
        flags = tuple(DecoratedFlag.of(vectors[i]) for i in sorted(vectors))
        lhs = delta_value(motivic_volume(cd, word, m3, flags), torsion=cfg.torsion_mode)
        rhs = boundary_w_value(cd, word, m3, flags, cfg.torsion_mode)
        ok = lhs == rhs
        print(f"delta(volume) = {lhs}")
        print(f"boundary W = {rhs}")
        print(f"delta matches boundary: {ok}")
        return EXIT_OK if ok else EXIT_FAIL
    print("delta check skipped: complex vectors")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="Cartan series A-G")
    common.add_argument("--rank", type=int)
    common.add_argument("--word", help="reduced word for w0, e.g. 1,2,1")
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--only", help="comma-separated criterion keys or numbers")
    common.add_argument("--torsion-mode", dest="torsion_mode", choices=("drop", "keep"))
    common.add_argument("--config", help="key=value settings file; flags take precedence")
    p = argparse.ArgumentParser(prog="clustercocycle", description="Cluster-coordinate cocycle toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("quiver", parents=[common], help="write the triangle quiver as JSON and DOT")
    sub.add_parser("cocycle", parents=[common], help="emit C1, C2 and C3")
    sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    vol = sub.add_parser("volume", parents=[common], help="motivic volume of a triangulation")
    vol.add_argument("triangulation", help="JSON file with vectors and tetrahedra")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        if args.command == "quiver":
            return cmd_quiver(cfg)
        if args.command == "cocycle":
            return cmd_cocycle(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_volume(cfg, args.triangulation)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
