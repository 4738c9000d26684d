"""Command line front end.

Every subcommand reads a JSON problem description (a path, or ``-`` for
stdin), runs one computation and writes a report that embeds the input.
Exit codes: 0 pass, 1 verification failure, 2 invalid input, 3 window
exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .combinatorics import ChargedProfile, InvalidInput, SignWord, YoungDiagram, core_quotient_compose
from .dimer import Geometry, Region, WindowExhausted, enumerate_Z, reference_vector
from .limit import Q_RULE, verify_limit
from .roots import ThetaMap, is_minimal_word, minimal_word
from .series import Series, format_monomial, grading
from .shuffling import verify_shuffle_bijection
from .vertex import Z_RTV
from .wallcross import verify_theta, verify_wallcross

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_WINDOW = 0, 1, 2, 3

SPEC_KEYS = {"L", "sigma", "lambda", "nu_plus", "nu_minus", "theta", "mutation_word", "bounds", "vertex"}


@dataclass(frozen=True)
class ProblemSpec:
    raw: dict
    sigma: SignWord
    lam: ChargedProfile
    nu_plus: YoungDiagram
    nu_minus: YoungDiagram
    theta: ThetaMap
    word: tuple | None
    box_bound: int | None
    degree_bound: int | None
    vertex: int | None

    def geometry(self, theta: ThetaMap | None = None) -> Geometry:
        return Geometry(self.sigma, self.lam, self.nu_plus, self.nu_minus, theta or self.theta)


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInput(f"{what} must be an integer, got {value!r}")
    return value


def _diagram(rows, what: str) -> YoungDiagram:
    if rows is None:
        return YoungDiagram()
    if not isinstance(rows, list):
        raise InvalidInput(f"{what} must be a list of row lengths")
    return YoungDiagram(tuple(_int(r, what) for r in rows))


def _profile(sigma: SignWord, data) -> ChargedProfile:
    if data is None:
        return ChargedProfile.trivial(sigma)
    if not isinstance(data, dict):
        raise InvalidInput("lambda must be an object")
    if "window" in data:
        values = {}
        if not isinstance(data["window"], list):
            raise InvalidInput("lambda.window must be a list of {h_doubled, sign} objects")
        for item in data["window"]:
            if not isinstance(item, dict):
                raise InvalidInput(f"lambda.window entries must be objects, got {item!r}")
            h2 = _int(item.get("h_doubled"), "h_doubled")
            if h2 % 2 == 0:
                raise InvalidInput(f"h_doubled must be odd, got {h2}")
            sign = _int(item.get("sign"), "sign")
            if sign not in (1, -1):
                raise InvalidInput(f"sign must be +1 or -1, got {sign}")
            values[h2] = sign
        return ChargedProfile.from_exceptions(sigma, values)
    if "cores" in data:
        cores = [_int(c, "core") for c in data["cores"]]
        if sum(cores) != 0:
            raise InvalidInput("cores must sum to zero")
        quotients = [_diagram(q, "quotient") for q in data.get("quotients", [[]] * sigma.L)]
        return core_quotient_compose(sigma, cores, quotients)
    raise InvalidInput("lambda needs either 'window' or 'cores'")


def parse_spec(data) -> ProblemSpec:
    if not isinstance(data, dict):
        raise InvalidInput("the problem description must be a JSON object")
    unknown = set(data) - SPEC_KEYS
    if unknown:
        raise InvalidInput(f"unknown keys: {sorted(unknown)}")
    if "sigma" not in data:
        raise InvalidInput("sigma is required")
    sigma = SignWord.parse(str(data["sigma"]))
    if "L" in data and _int(data["L"], "L") != sigma.L:
        raise InvalidInput(f"L={data['L']} does not match sigma of length {sigma.L}")
    lam = _profile(sigma, data.get("lambda"))
    has_theta, has_word = "theta" in data, "mutation_word" in data
    if has_theta == has_word:
        raise InvalidInput("give exactly one of theta and mutation_word")
    word = None
    if has_word:
        word = tuple(_int(i, "mutation_word entry") for i in data["mutation_word"])
        if sigma.L < 2 and word:
            raise InvalidInput("mutations need L >= 2")
        theta = ThetaMap.from_word(sigma.L, word) if word else ThetaMap.identity(sigma.L)
    else:
        images = data["theta"]
        if not isinstance(images, list) or len(images) != sigma.L:
            raise InvalidInput(f"theta must list {sigma.L} doubled half-integers")
        theta = ThetaMap(tuple(_int(x, "theta entry") for x in images))
    bounds = data.get("bounds") or {}
    if not isinstance(bounds, dict):
        raise InvalidInput("bounds must be an object")
    box = bounds.get("box_bound")
    deg = bounds.get("degree_bound")
    vertex = data.get("vertex")
    return ProblemSpec(
        raw=data,
        sigma=sigma,
        lam=lam,
        nu_plus=_diagram(data.get("nu_plus"), "nu_plus"),
        nu_minus=_diagram(data.get("nu_minus"), "nu_minus"),
        theta=theta,
        word=word,
        box_bound=None if box is None else _int(box, "box_bound"),
        degree_bound=None if deg is None else _int(deg, "degree_bound"),
        vertex=None if vertex is None else _int(vertex, "vertex"),
    )


# -- output helpers --------------------------------------------------------------


def _series_json(s: Series) -> dict:
    return s.to_json()


def _series_text(s: Series) -> list[str]:
    lines = []
    for m, c in sorted(s.terms.items(), key=lambda t: (grading(t[0], s.refined), t[0])):
        lines.append(f"  {c:>8}  {format_monomial(m, s.refined)}")
    return lines


def _degree_profile(s: Series) -> dict:
    out: dict = {}
    for m, c in s.terms.items():
        g = grading(m, s.refined)
        out[g] = out.get(g, 0) + c
    return dict(sorted(out.items()))


def _bound(cli_value, spec_value, name: str) -> int:
    value = cli_value if cli_value is not None else spec_value
    if value is None:
        raise InvalidInput(f"{name} is required (flag or bounds.{name})")
    if value < 0:
        raise InvalidInput(f"{name} must be nonnegative")
    return value


@dataclass
class Outcome:
    result: dict
    text: list
    passed: bool
    figure: object = None  # callable(ax) drawing a summary


# -- commands ---------------------------------------------------------------------


def cmd_enumerate(spec: ProblemSpec, args) -> Outcome:
    box = _bound(args.box_bound, spec.box_bound, "box_bound")
    e = enumerate_Z(spec.geometry(), box, args.threads, args.window_margin)
    series = e.series.specialize() if args.unrefined else e.series
    result = {
        "box_bound": box,
        "region": e.region.to_json(),
        "states_per_box_count": e.counts,
        "outside_region": [list(m) for m in e.outside],
        "series": _series_json(series),
    }
    text = [f"Z for sigma={spec.sigma} theta={list(spec.theta.images)} (box bound {box})"]
    text += _series_text(series)

    def draw(ax):
        ax.bar(range(len(e.counts)), e.counts)
        ax.set_xlabel("boxes")
        ax.set_ylabel("states")
        ax.set_title("melting states per box count")

    return Outcome(result, text, not e.outside, draw)


def _comparison_figure(cmp):
    def draw(ax):
        exp, act = _degree_profile(cmp.expected), _degree_profile(cmp.actual)
        keys = sorted(set(exp) | set(act))
        ax.plot(keys, [exp.get(k, 0) for k in keys], "o-", label="predicted")
        ax.plot(keys, [act.get(k, 0) for k in keys], "x--", label="enumerated")
        ax.set_xlabel("grading")
        ax.set_ylabel("coefficient sum")
        ax.legend()

    return draw


def cmd_wallcross(spec: ProblemSpec, args) -> Outcome:
    box = _bound(args.box_bound, spec.box_bound, "box_bound")
    vertex = args.vertex if args.vertex is not None else spec.vertex
    if vertex is not None:
        if args.unrefined:
            raise InvalidInput("--unrefined applies to the composite check (omit the vertex)")
        cmp = verify_wallcross(spec.geometry(), vertex, box, args.threads, args.window_margin)
        head = f"wall-crossing at vertex {vertex}"
    else:
        word = spec.word if spec.word is not None else tuple(minimal_word(spec.theta))
        if not is_minimal_word(spec.sigma.L, word):
            raise InvalidInput(f"mutation word {list(word)} is not minimal")
        nu = (spec.nu_plus, spec.nu_minus)
        cmp = verify_theta(spec.sigma, spec.lam, word, box, args.threads, args.window_margin, nu, args.unrefined)
        head = f"composite wall-crossing along {list(word)}"
    status = "PASS" if cmp.passed else "FAIL"
    text = [f"{head}: {status} ({len(cmp.mismatches)} mismatches, {len(cmp.outside)} outside)"]
    for m, a, b in cmp.mismatches[:20]:
        text.append(f"  {format_monomial(m, cmp.expected.refined)}: expected {a}, got {b}")
    return Outcome(cmp.to_json(), text, cmp.passed, _comparison_figure(cmp))


def cmd_limit(spec: ProblemSpec, args) -> Outcome:
    deg = _bound(args.degree_bound, spec.degree_bound, "degree_bound")
    rep = verify_limit(spec.sigma, spec.lam, spec.nu_plus, spec.nu_minus, deg, None, args.threads, args.window_margin)
    status = "PASS" if rep.passed else "FAIL"
    text = [
        f"limit comparison ({rep.mode}) at degree {deg}: {status}",
        f"  chamber theta={list(rep.theta.images)} word={rep.word}",
        f"  edge constant: {Q_RULE}",
    ]
    for m, a, b in rep.comparison.mismatches[:20]:
        text.append(f"  {format_monomial(m)}: chamber {a}, vertex {b}")
    return Outcome(rep.to_json(), text, rep.passed, _comparison_figure(rep.comparison))


def cmd_vertex(spec: ProblemSpec, args) -> Outcome:
    deg = _bound(args.degree_bound, spec.degree_bound, "degree_bound")
    geom = spec.geometry(ThetaMap.identity(spec.sigma.L))
    region = Region(reference_vector(geom, args.window_margin), deg)
    rtv = Z_RTV(spec.sigma, spec.lam, spec.nu_plus, spec.nu_minus, region)
    series = rtv.series.specialize() if args.unrefined else rtv.series
    lead = min(series.terms, key=lambda m: (grading(m, series.refined), m)) if series.terms else None
    result = {
        "degree_bound": deg,
        "region": region.to_json(),
        "stable": rtv.stable,
        "leading": None if lead is None else {"exp": list(lead), "coeff": series.terms[lead]},
        "Q_rule": Q_RULE,
        "series": _series_json(series),
    }
    text = [f"vertex sum for sigma={spec.sigma} nu+={list(spec.nu_plus.rows)} nu-={list(spec.nu_minus.rows)}"]
    if lead is not None:
        text.append(f"  leading term: {series.terms[lead]}*{format_monomial(lead, series.refined)}")
    text += _series_text(series)

    def draw(ax):
        prof = _degree_profile(series)
        ax.bar(list(prof), list(prof.values()))
        ax.set_xlabel("grading")
        ax.set_ylabel("coefficient sum")

    return Outcome(result, text, rtv.stable, draw)


def cmd_shuffle_check(spec: ProblemSpec, args) -> Outcome:
    box = _bound(args.box_bound, spec.box_bound, "box_bound")
    vertex = args.vertex if args.vertex is not None else spec.vertex
    if vertex is None:
        raise InvalidInput("shuffle-check needs a vertex (--vertex or spec.vertex)")
    rep = verify_shuffle_bijection(spec.geometry(), vertex, box, args.threads)
    status = "PASS" if rep.passed else "FAIL"
    text = [
        f"{rep.kind} shuffle at vertex {vertex}: {status}",
        f"  sources {rep.sources}, images {rep.images}, targets {rep.targets}",
    ]
    text += [f"  {f}" for f in rep.failures[:20]]

    def draw(ax):
        ax.bar(["sources", "images", "targets"], [rep.sources, rep.images, rep.targets])
        ax.set_ylabel("configurations")

    return Outcome(rep.to_json(), text, rep.passed, draw)


COMMANDS = {
    "enumerate": cmd_enumerate,
    "wallcross": cmd_wallcross,
    "limit": cmd_limit,
    "vertex": cmd_vertex,
    "shuffle-check": cmd_shuffle_check,
}


# -- driver ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncdt", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("spec", help="problem description (JSON file, or - for stdin)")
    p.add_argument("--box-bound", type=int)
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--unrefined", action="store_true", help="specialize q_+ = q_- = q_0^(1/2)")
    p.add_argument("--threads", type=int, help="worker processes (default: $NCDT_THREADS or 1)")
    p.add_argument("--window-margin", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--vertex", type=int, help="mutation vertex for wallcross and shuffle-check")
    p.add_argument("-o", "--output", help="report path; figures are written next to it")
    return p


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read problem description: {exc}") from None


def render(command: str, spec: ProblemSpec, outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command, "spec": spec.raw, "passed": outcome.passed, "result": outcome.result}
        return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    lines = [f"# ncdt {command}", "# spec: " + json.dumps(spec.raw, sort_keys=True, ensure_ascii=False)]
    lines += outcome.text
    return "\n".join(lines) + "\n"


def write_figure(outcome: Outcome, output: Path, title: str) -> Path | None:
    if outcome.figure is None:
        return None
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    outcome.figure(ax)
    ax.set_title(title)
    path = output.with_suffix(".png")
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is None and os.environ.get("NCDT_THREADS"):
        try:
            args.threads = int(os.environ["NCDT_THREADS"])
        except ValueError:
            print("error: NCDT_THREADS must be an integer", file=sys.stderr)
            return EXIT_INVALID
    try:
        spec = parse_spec(_load(args.spec))
        outcome = COMMANDS[args.command](spec, args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except WindowExhausted as exc:
        print(f"error: window exhausted: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    body = render(args.command, spec, outcome, args.format)
    if args.output:
        out = Path(args.output)
        out.write_text(body, encoding="utf-8")
        write_figure(outcome, out, f"ncdt {args.command}")
    else:
        sys.stdout.write(body)
    return EXIT_OK if outcome.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
