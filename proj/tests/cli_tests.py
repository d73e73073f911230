"""End-to-end tests for the hcd command-line tool.

The binary path arrives in the HCD_BIN environment variable.
"""

import json
import os
import subprocess
import sys
import tempfile

BIN = os.environ.get("HCD_BIN")
PASSED = 0


def run(args, stdin=None):
    proc = subprocess.run([BIN] + args, input=stdin, capture_output=True,
                          text=True, timeout=300)
    return proc


def check(cond, label, extra=""):
    global PASSED
    if not cond:
        raise AssertionError(f"{label}{': ' + extra if extra else ''}")
    PASSED += 1
    print(f"ok  {label}")


def strip_wall_ms(csv_text):
    """Blank the wall-clock column so deterministic output can be compared."""
    rows = []
    for i, line in enumerate(csv_text.splitlines()):
        cells = line.split(",")
        if i > 0 and len(cells) > 11:
            cells[11] = ""
        rows.append(",".join(cells))
    return "\n".join(rows)


EXPERIMENT_HEADER = ("method,sweep,sweep_value,replication,seed,nmi,similarity_error,"
                     "level1_accuracy,level2_accuracy,phat_error,k_hat,wall_ms,error")
BENCH_HEADER = ("k,replication,seed,n,edges,hcd_ms,hcd_k_hat,hcd_applies,hcd_work,"
                "hcd_stopper_applies,hcd_stopper_work,kway_ms,kway_applies,kway_work,"
                "levels_ok")


def test_generate(tmp):
    cfg = os.path.join(tmp, "model.cfg")
    with open(cfg, "w") as f:
        f.write("model = balanced\n"
                "n = 200\n"
                "k = 4\n"
                "degree = 15\n"
                "out_in_ratio = 0.1\n"
                "seed = 4242\n")
    edges = os.path.join(tmp, "edges.txt")
    truth = os.path.join(tmp, "truth.json")

    proc = run(["generate", "-c", cfg, "-o", edges, "--truth", truth])
    check(proc.returncode == 0, "generate exits 0", proc.stderr)

    with open(edges) as f:
        lines = [ln for ln in f.read().splitlines() if ln and not ln.startswith("#")]
    check(len(lines) > 100, "generate wrote an edge list")
    ids = set()
    for ln in lines:
        parts = ln.split()
        check2 = len(parts) == 2
        if not check2:
            raise AssertionError(f"malformed edge line: {ln!r}")
        ids.update(parts)
    check(True, "generate edge lines have two endpoints")
    check(len(ids) <= 200, "generate node ids within n")

    with open(truth) as f:
        t = json.load(f)
    check(t["n"] == 200, "truth n")
    check(t["k"] == 4, "truth k")
    check(t["seed"] == 4242, "truth seed from config")
    check(len(t["communities"]) == 200, "truth labels every node")
    check(set(t["communities"].values()) == {"00", "01", "10", "11"},
          "truth community names")
    check(t["tree"]["label"] == "" and len(t["tree"]["children"]) == 2,
          "truth tree rooted binary")

    # Determinism, seed override, and stdout emission.
    edges2 = os.path.join(tmp, "edges2.txt")
    run(["generate", "-c", cfg, "-o", edges2])
    with open(edges) as a, open(edges2) as b:
        check(a.read() == b.read(), "generate deterministic for fixed seed")
    truth99 = os.path.join(tmp, "truth99.json")
    run(["generate", "-c", cfg, "-o", edges2, "--truth", truth99, "--seed", "99"])
    with open(edges) as a, open(edges2) as b:
        check(a.read() != b.read(), "generate --seed overrides config seed")
    with open(truth99) as f:
        check(json.load(f)["seed"] == 99, "truth records the override seed")
    proc = run(["generate", "-c", cfg])
    with open(edges) as f:
        check(proc.stdout == f.read(), "generate '-o -' matches file output")
    return edges


def test_detect(tmp, edges):
    out = os.path.join(tmp, "result.json")
    proc = run(["detect", "-i", edges, "-o", out, "--seed", "5"])
    check(proc.returncode == 0, "detect exits 0", proc.stderr)
    with open(out) as f:
        text = f.read()
    result = json.loads(text)
    for key in ("k_hat", "labels", "tree", "diagnostics", "level_nnz",
                "splitter", "stopper"):
        check(key in result, f"detect result has '{key}'")
    check(result["k_hat"] >= 2, "detect split the graph")
    check(len(result["labels"]) == 200, "detect labels keyed by node id")
    check("0" in result["labels"], "detect label map uses external ids")

    proc2 = run(["detect", "-i", edges, "--seed", "5"])
    check(proc2.stdout == text, "detect stdout matches file output")
    with open(edges) as f:
        edge_text = f.read()
    proc3 = run(["detect", "--seed", "5"], stdin=edge_text)
    check(proc3.stdout == text, "detect reads stdin when no input given")
    proc4 = run(["detect", "-i", edges, "--seed", "5", "--method", "sign"])
    check(proc4.returncode == 0, "detect --method sign runs", proc4.stderr)

    proc5 = run(["detect", "-i", edges, "--stopper", "fixed:1"])
    check(json.loads(proc5.stdout)["k_hat"] == 2, "detect --stopper fixed:1 gives 2 leaves")

    # Cleanup flags on a small crafted graph: a 5-clique, a pendant hanging
    # off it, and a far-away disconnected edge.
    crafted = os.path.join(tmp, "crafted.txt")
    with open(crafted, "w") as f:
        for i in range(5):
            for j in range(i + 1, 5):
                f.write(f"a{i} a{j}\n")
        f.write("a0 pendant\n")
        f.write("x y\n")
    proc = run(["detect", "-i", crafted, "--lcc", "--stopper", "none",
                "--min-size", "2"])
    check(proc.returncode == 0, "detect --lcc runs", proc.stderr)
    labels = json.loads(proc.stdout)["labels"]
    check(len(labels) == 6 and "x" not in labels,
          "detect --lcc keeps only the largest component")
    proc = run(["detect", "-i", crafted, "--lcc", "--core", "2",
                "--stopper", "none", "--min-size", "2"])
    labels = json.loads(proc.stdout)["labels"]
    check(sorted(labels) == [f"a{i}" for i in range(5)],
          "detect --core trims low-degree nodes")
    proc = run(["detect", "-i", crafted, "--core", "5"])
    check(proc.returncode == 1, "detect empty core exits 1")

    # Error paths.
    check(run(["detect", "-i", os.path.join(tmp, "missing.txt")]).returncode == 1,
          "detect missing input exits 1")
    check(run(["detect", "-i", edges, "--method", "bogus"]).returncode == 2,
          "detect unknown method exits 2")
    check(run(["detect", "-i", edges, "--stopper", "sometimes"]).returncode == 2,
          "detect unknown stopper exits 2")


def test_experiment(tmp):
    cfg = os.path.join(tmp, "exp.cfg")
    with open(cfg, "w") as f:
        f.write("model = explicit\n"
                "d = 1\n"
                "p = [0.5, 0.05]\n"
                "n = 60\n"
                "replications = 2\n"
                "methods = [hcd_spec, kway_rsc]\n"
                "metrics = [nmi, k_hat]\n"
                "stopper = fixed:1\n"
                "seed = 99\n")
    csv_path = os.path.join(tmp, "rows.csv")
    summary_path = os.path.join(tmp, "summary.json")
    proc = run(["experiment", "-c", cfg, "--csv", csv_path, "--summary", summary_path])
    check(proc.returncode == 0, "experiment exits 0", proc.stderr)
    with open(csv_path) as f:
        csv_text = f.read()
    lines = csv_text.splitlines()
    check(lines[0] == EXPERIMENT_HEADER, "experiment csv header exact")
    check(len(lines) == 5, "experiment csv rows (2 methods x 2 reps)")
    row = lines[1].split(",")
    check(row[0] == "hcd_spec" and row[1] == "none", "experiment row identity")
    check(row[5] not in ("", "NaN"), "experiment nmi computed")
    check(row[6] == "NaN", "experiment unwanted metric is NaN")
    with open(summary_path) as f:
        summary = json.load(f)
    check(summary["replications"] == 2 and len(summary["cells"]) == 2,
          "experiment summary cells")

    proc2 = run(["experiment", "-c", cfg])
    check(strip_wall_ms(proc2.stdout) == strip_wall_ms(csv_text),
          "experiment deterministic modulo wall time")

    # Error paths.
    check(run(["experiment"]).returncode == 2, "experiment missing -c exits 2")
    check(run(["experiment", "-c", cfg, "--bogus-flag"]).returncode == 2,
          "experiment unknown flag exits 2")
    bad = os.path.join(tmp, "bad.cfg")
    with open(bad, "w") as f:
        f.write("model = nope\n")
    check(run(["experiment", "-c", bad]).returncode == 2,
          "experiment bad config exits 2")
    check(run(["experiment", "-c", os.path.join(tmp, "missing.cfg")]).returncode == 2,
          "experiment missing config file exits 2")


def test_bench(tmp):
    proc = run(["bench", "--n", "160", "--k", "2", "--k", "4", "--degree", "12",
                "--ratio", "0.15", "--reps", "1", "--seed", "7"])
    check(proc.returncode == 0, "bench exits 0", proc.stderr)
    lines = proc.stdout.splitlines()
    check(lines[0] == BENCH_HEADER, "bench csv header exact")
    check(len(lines) == 3, "bench csv rows (2 k values x 1 rep)")
    for line in lines[1:]:
        cells = line.split(",")
        check(cells[-1] == "1", "bench work accounting within bounds")
        check(int(cells[4]) > 0, "bench counted edges")


def test_help_and_errors():
    check(run(["--help"]).returncode == 0, "--help exits 0")
    check(run([]).returncode == 2, "no subcommand exits 2")
    check(run(["frobnicate"]).returncode == 2, "unknown subcommand exits 2")
    check(run(["generate"]).returncode == 2, "generate missing -c exits 2")


def main():
    if not BIN or not os.path.exists(BIN):
        print(f"FAIL: HCD_BIN not set or missing: {BIN!r}", file=sys.stderr)
        return 1
    with tempfile.TemporaryDirectory() as tmp:
        edges = test_generate(tmp)
        test_detect(tmp, edges)
        test_experiment(tmp)
        test_bench(tmp)
        test_help_and_errors()
    print(f"cli tests passed ({PASSED} checks)")
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except AssertionError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        sys.exit(1)
