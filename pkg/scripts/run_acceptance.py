import argparse
import contextlib
import io
import json
import math
import tempfile
import time
from pathlib import Path

import pandas as pd
from tqdm import tqdm

from src.cli import dispatch
from src.config import configure_logging, load_config
from src.exact_oracles import (
    OracleLimits,
    chromatic_number,
    independence_number,
    min_biclique_partition,
    min_cover_weight,
)
from src.errors import ResourceError
from src.file_formats import parse_system, serialize_graph, serialize_system, write_text
from src.generators import (
    complete_graph,
    gp_star_partition,
    ks_code_cover,
    random_biclique_union,
    random_graph,
    seeded_generator,
)
from src.graph_core import cover_stats, union_graph
from src.hansel import (
    derandomized_extract,
    enumerate_mean_survivors,
    expected_survivors,
    randomized_extract,
)
from src.mv_coloring import colors_bound, invert_bound, mv_color, verify_proper
from src.peeling import analyze_trace, peel, theorem3_bound


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise AssertionError(message)


def graham_pollak():
    for k in range(2, 6):
        result = min_biclique_partition(complete_graph(k))
        _check(result.value == k - 1, f"bp(K_{k}) = {result.value}, expected {k - 1}")
    return "bp(K_k) = k-1 for k in 2..5"


def katona_szemeredi():
    for k in range(2, 5):
        value = min_cover_weight(complete_graph(k)).value
        _check(value >= k * math.log2(k) - 1e-9, f"cover weight of K_{k} is {value}")
        if k == 3:
            _check(value == 5, f"cover weight of K_3 is {value}, expected 5")
        if k == 4:
            _check(value == 8, f"cover weight of K_4 is {value}, expected 8")
    return "cover weights 2, 5, 8 for k = 2, 3, 4"


def _coloring_instances(count: int, rng):
    for seed in range(count):
        m = int(rng.integers(2, 17))
        n = int(rng.integers(max(8, 4 * m), 301))
        yield random_biclique_union(n, m, seed)
    for k in range(2, 13):
        yield gp_star_partition([1] * k)


def coloring_suite(count: int = 200):
    rng = seeded_generator(0)
    runs = 0
    for system in tqdm(list(_coloring_instances(count, rng)), desc="coloring"):
        m = system.m
        coloring = mv_color(system)
        g = union_graph(system)
        _check(verify_proper(g, coloring).ok, f"improper coloring with m={m}")
        bottom = sum(1 << v for v, seq in coloring.assignment.items() if not seq)
        _check(g.is_independent(bottom), "BOTTOM class is not independent")
        _check(coloring.max_length() <= m.bit_length(), "color sequence too long")
        for seq in coloring.assignment.values():
            for position, label in enumerate(seq, start=1):
                _check(label <= m >> (position - 1), f"label {label} at position {position} with m={m}")
        for record in coloring.trace:
            _check(record.cutting_size <= m >> (record.stage - 1), "cutting list did not halve")
        _check(coloring.distinct_colors <= colors_bound(m), "more colors than colors_bound(m)")
        _check(invert_bound(coloring.distinct_colors) <= m, "invert_bound(colors) exceeds m")
        runs += 1
    return f"{runs} colorings checked"


def hansel_suite(seeds: int = 1000):
    systems = [ks_code_cover(k) for k in range(2, 65)]
    systems += [random_biclique_union(4 * m + 8, m, seed) for seed, m in enumerate(range(2, 11))]
    systems += [gp_star_partition([1] * k) for k in range(2, 11)]
    for system in tqdm(systems, desc="hansel"):
        g = union_graph(system)
        n, w = system.universe_n, cover_stats(system).weight
        result = derandomized_extract(system)
        _check(g.is_independent(result.survivors), "derandomized set is not independent")
        _check(result.size >= math.ceil(n * 2.0 ** (-w / n) - 1e-9), "derandomized set below guarantee")
        if system.m <= 10:
            _check(enumerate_mean_survivors(system) == expected_survivors(system), "expectation mismatch")
    for system in tqdm(systems, desc="hansel seeds"):
        g = union_graph(system)
        for seed in range(seeds):
            _check(g.is_independent(randomized_extract(system, seed).survivors), f"seed {seed} not independent")
    return f"{len(systems)} covers checked, {seeds} seeds each"


def peeling_suite(count: int = 50):
    rng = seeded_generator(1)
    for seed in tqdm(range(count), desc="peeling"):
        n = int(rng.integers(8, 21))
        m = int(rng.integers(1, n // 2 + 1))
        system = random_biclique_union(n, m, seed)
        g = union_graph(system)
        k = chromatic_number(g)
        trace = peel(g, system, k)
        analysis = analyze_trace(trace, k, n)
        _check(analysis["t_bound_holds"], f"t bound fails on seed {seed}")
    for k in (5, 16, 1024):
        log_k = math.log2(k)
        direct = k * log_k - k * math.log2(log_k) - k * math.log2(math.log2(log_k))
        _check(abs(theorem3_bound(k) - direct) <= 1e-3, f"theorem3_bound({k}) mismatch")
    return f"{count} peelings checked"


def bound_functions():
    _check([colors_bound(m) for m in (1, 2, 4)] == [2, 5, 21], "colors_bound values")
    _check([invert_bound(k) for k in (2, 5, 6)] == [1, 2, 3], "invert_bound values")
    values = [invert_bound(k) for k in range(1, 10_001)]
    _check(all(a <= b for a, b in zip(values, values[1:])), "invert_bound not monotone")
    return "bound functions match"


def cross_oracles(count: int = 30):
    limits = OracleLimits.from_config()
    solved, seed = 0, 0
    with tqdm(total=count, desc="oracles") as progress:
        while solved < count and seed < 20 * count:
            g = random_graph(2 + seed % 7, 0.4, seed)
            seed += 1
            if not g.edges:
                continue
            try:
                chi = chromatic_number(g, limits)
                alpha = independence_number(g, limits)
                bp = min_biclique_partition(g, limits).value
                weight = min_cover_weight(g, limits).value
            except ResourceError:
                continue
            _check(bp >= math.ceil(math.log2(chi)), f"bp < log2 chi on seed {seed - 1}")
            _check(weight >= g.n * math.log2(g.n / alpha) - 1e-9, f"cover weight below Hansel on seed {seed - 1}")
            solved += 1
            progress.update(1)
    _check(solved == count, f"only {solved} of {count} instances solved within the guards")
    return f"{solved} instances solved by every oracle ({seed} drawn)"


def _payload(path: Path) -> str:
    data = json.loads(path.read_text())
    data.pop("timings", None)
    return json.dumps(data, sort_keys=True)


def _dispatch_quietly(argv) -> int:
    with contextlib.redirect_stdout(io.StringIO()):
        return dispatch(argv)


def cli_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        gen = ["gen", "random", "--n", "20", "--m", "5", "--seed", "7"]
        system_path, again = tmp / "system.txt", tmp / "system_again.txt"
        _dispatch_quietly(gen + ["--out", str(system_path)])
        _dispatch_quietly(gen + ["--out", str(again)])
        _check(system_path.read_bytes() == again.read_bytes(), "gen random is not deterministic")
        text = system_path.read_text()
        _check(serialize_system(parse_system(text)) == text, "gen/parse/serialize round trip differs")

        graph_path = tmp / "graph.txt"
        write_text(graph_path, serialize_graph(union_graph(parse_system(text))))

        commands = [
            ["color", str(system_path)],
            ["hansel", "random", str(system_path), "--seed", "3"],
            ["hansel", "derand", str(system_path)],
            ["hansel", "expect", str(system_path), "--enumerate"],
            ["peel", str(graph_path), str(system_path)],
            ["oracle", "chi", str(graph_path)],
        ]
        for argv in commands:
            payloads = []
            for run in range(2):
                out = tmp / f"report_{run}.json"
                _dispatch_quietly(argv + ["--json", str(out)])
                payloads.append(_payload(out))
            _check(payloads[0] == payloads[1], f"{' '.join(argv[:2])} is not deterministic")
    return "seeded commands reproduce"


BATTERIES = [
    ("graham_pollak", graham_pollak),
    ("katona_szemeredi", katona_szemeredi),
    ("coloring", coloring_suite),
    ("hansel", hansel_suite),
    ("peeling", peeling_suite),
    ("bounds", bound_functions),
    ("cross_oracles", cross_oracles),
    ("cli_determinism", cli_determinism),
]


def main():
    parser = argparse.ArgumentParser(description="Run the acceptance batteries.")
    parser.add_argument(
        "--only",
        nargs="*",
        default=None,
        help="Names of batteries to run (default: all).",
    )
    parser.add_argument(
        "--save",
        action="store_true",
        help="If set, write the summary CSV under the configured reports directory.",
    )
    args = parser.parse_args()
    configure_logging(False)

    rows = []
    for name, battery in BATTERIES:
        if args.only and name not in args.only:
            continue
        print(f"[INFO] Running {name}")
        started = time.perf_counter()
        try:
            detail, ok = battery(), True
        except AssertionError as exc:
            detail, ok = str(exc), False
        rows.append({"battery": name, "ok": ok, "seconds": round(time.perf_counter() - started, 2), "detail": detail})

    summary = pd.DataFrame(rows)
    print("\n[SUMMARY]")
    print(summary.to_string(index=False))

    if args.save:
        out = Path(load_config()["paths"]["reports_dir"]) / "acceptance.csv"
        write_text(out, summary.to_csv(index=False))
        print(f"[INFO] Wrote summary to {out}")

    return 0 if summary["ok"].all() else 1


if __name__ == "__main__":
    raise SystemExit(main())
