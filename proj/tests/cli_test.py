"""End-to-end checks of the cstar command line: exit codes, round trips and
JSON output against the published schema."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, CORPUS, SCHEMAS = sys.argv[1:4]
SCHEMA = json.load(open(os.path.join(SCHEMAS, "report.schema.json")))
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)
failures = []


def c(name):
    return os.path.join(CORPUS, name)


def run(*args, env=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=env)


def expect(label, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + label)
    if not cond:
        failures.append(label)
        if detail:
            print("     " + detail.strip().replace("\n", "\n     ")[:2000])


def expect_exit(label, args, code):
    r = run(*args)
    expect(f"{label}: exit {code}", r.returncode == code, f"got {r.returncode}\n{r.stdout}\n{r.stderr}")
    return r


def expect_json(label, args, code=0):
    r = run(*args, "--json")
    expect(f"{label}: exit {code}", r.returncode == code, f"got {r.returncode}\n{r.stderr}")
    try:
        doc = json.loads(r.stdout)
    except json.JSONDecodeError as e:
        expect(f"{label}: json", False, str(e))
        return None
    errors = sorted(VALIDATOR.iter_errors(doc), key=lambda e: list(e.path))
    expect(f"{label}: schema", not errors, "\n".join(f"{list(e.path)}: {e.message}" for e in errors[:5]))
    return doc


# exit codes from the documented examples
expect_exit("check strict chain", ["check", c("self_adjoint_to_positive.drv"), "--strict"], 0)
expect_exit("refute x on an idempotent", ["refute", "x", "-p", c("idempotent_lam1.pres"), "--dim", "2", "--seed", "7"], 0)
expect_exit("missing derivation", ["check", "missing.drv"], 2)
expect_exit("unknown subcommand", ["frobnicate"], 2)
expect_exit("parse error", ["normbound", "x +", "-p", c("idempotent_lam1.pres")], 2)
expect_exit("literal idempotent chain", ["check", c("idempotent_literal.drv"), "--permissive"], 1)
expect_exit("unregistered lemmas in strict mode", ["check", c("left_inv.drv"), "--no-registry"], 1)
expect_exit("unregistered lemmas in permissive mode", ["check", c("left_inv.drv"), "--permissive", "--no-registry"], 0)
expect_exit("exclusive modes", ["check", c("left_inv.drv"), "--strict", "--permissive"], 2)

v = run("--version")
expect("version lists registry hashes", v.returncode == 0 and "functions " in v.stdout and "lemmas " in v.stdout, v.stdout)

# every presentation and derivation round-trips through canonical printing
for name in sorted(os.listdir(CORPUS)):
    if not name.endswith((".pres", ".drv")):
        continue
    path = c(name)
    first = run("parse", path)
    if first.returncode != 0:
        expect(f"parse {name}", False, first.stderr)
        continue
    if name.endswith(".pres"):
        with tempfile.NamedTemporaryFile("w", suffix=".pres", delete=False) as f:
            f.write(first.stdout)
        second = run("parse", f.name)
        os.unlink(f.name)
        expect(f"round trip {name}", second.stdout == first.stdout, second.stdout + second.stderr)

# unitization matches the unital file byte for byte
u = run("unitize", c("selfadjoint_nonunital.pres"))
p = run("parse", c("selfadjoint_unital.pres"))
expect("unitize matches the unital presentation", u.returncode == 0 and u.stdout == p.stdout, u.stdout + p.stdout)

# JSON outputs
expect_json("parse json", ["parse", c("left_inv_start.pres")])
expect_json("parse derivation json", ["parse", c("left_inv.drv")])
expect_json("validate json", ["validate", c("idempotent_start.pres")])
doc = expect_json("check json", ["check", c("idempotent.drv")])
if doc:
    expect("check json pass", doc["result"]["pass"] is True)
    expect("manifest hashes three inputs", len(doc["manifest"]["inputs"]) == 3)
expect_json("failed check json", ["check", c("idempotent_literal.drv"), "--permissive"], 1)
expect_json("simplify json", ["simplify", c("idempotent_collapse.pres")])
doc = expect_json("split json", ["split", c("left_inv_end.pres")])
if doc:
    expect("split gives two factors", doc["result"]["factors"] == 2)
expect_json("unitize json", ["unitize", c("selfadjoint_nonunital.pres")])
expect_json("normbound json", ["normbound", "x x*", "-p", c("idempotent_lam1.pres")])
expect_json("repsearch json", ["repsearch", "-p", c("idempotent_lam1.pres"), "--restarts", "3"])
expect_json("refute json", ["refute", "x", "-p", c("idempotent_lam1.pres"), "--dim", "2", "--seed", "7"])
expect_json("lowerbound json", ["lowerbound", "x", "-p", c("idempotent_lam1.pres"), "--restarts", "3"])
with tempfile.TemporaryDirectory() as out:
    doc = expect_json("bridge json", ["bridge", c("self_adjoint.pres"), c("positive.pres"),
                                      "--map1", "x = 2 y - 1", "--map2", "y = 1/2 x + 1/2", "-o", out])
    if doc:
        expect("bridge passes", doc["result"]["pass"] is True)
    for d in ("first.drv", "second.drv"):
        expect_exit(f"bridge output {d} rechecks", ["check", os.path.join(out, d), "--strict"], 0)

# manifests reproduce: identical inputs give identical outcomes
with tempfile.TemporaryDirectory() as out:
    m1, m2 = os.path.join(out, "a.json"), os.path.join(out, "b.json")
    args = ["repsearch", "-p", c("idempotent_lam1.pres"), "--seed", "11", "--restarts", "4", "--json"]
    r1, r2 = run(*args, "--manifest", m1), run(*args, "--manifest", m2)
    a, b = json.load(open(m1)), json.load(open(m2))
    same = json.loads(r1.stdout)["result"] == json.loads(r2.stdout)["result"]
    expect("repsearch reruns are identical", same and a["inputs"] == b["inputs"] and a["outcome"] == b["outcome"])

# registry file from the environment
with tempfile.TemporaryDirectory() as out:
    reg = os.path.join(out, "extra.reg")
    with open(reg, "w") as f:
        f.write("function ramp\n  piece 0 1 : 0, 1\nend\n")
    env = dict(os.environ, CSTAR_REGISTRY=reg)
    r = run("normbound", "ramp(x + x*)", "-p", c("idempotent_lam1.pres"), env=env)
    expect("registry from CSTAR_REGISTRY", r.returncode == 0 and "norm <= 1" in r.stdout, r.stdout + r.stderr)
    r = run("normbound", "ramp(x + x*)", "-p", c("idempotent_lam1.pres"), "--no-registry", env=env)
    expect("--no-registry ignores it", r.returncode == 2, r.stdout + r.stderr)

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
