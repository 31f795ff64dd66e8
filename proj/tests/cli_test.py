import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

CLI = sys.argv[1]
SCHEMAS = Path(sys.argv[2])
failures = []


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("HILBERT_CACHE_DIR", None)
    e.update(env or {})
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=e, timeout=900)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  {detail}" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def validate(name, schema, text):
    try:
        doc = json.loads(text)
        jsonschema.validate(doc, json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))
        check(f"{name} matches {schema}", True)
        return doc
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        check(f"{name} matches {schema}", False, str(e)[:300])
        return None


cases = [
    ("field info", ["field", "info", "--m", "5"], "field_info", 0),
    ("field info m=13", ["field", "info", "--m", "13"], "field_info", 0),
    ("ideals list", ["ideals", "list", "--max-norm", "30", "--factor"], "ideals_list", 0),
    ("eisenstein", ["eisenstein", "--k", "4", "--T", "8"], "qexp", 0),
    ("poincare coeffs", ["poincare", "coeffs", "--k", "8", "--T", "4"], "qexp", 0),
    ("poincare eval", ["poincare", "eval", "--k", "8", "--T", "8", "--z", "0,1.1;0,0.9"], "poincare_eval", 0),
    ("bracket", ["bracket", "--k", "4", "--l", "6", "--n", "1,0", "--T", "6"], "qexp", 0),
    ("hecke", ["hecke", "--ideal", "1:5:2", "--max-norm", "30"], "series", 0),
    ("lseries value", ["lseries", "value", "--series", "zeta", "--s", "2", "--max-norm", "2000"], "lseries_value", 0),
    ("kernel cohen", ["kernel", "cohen", "--s", "-2", "--k", "8", "--T", "4", "--M", "4"], "qexp", 0),
    ("kernel double", ["kernel", "double", "--s", "-2", "--w", "-2", "--k", "8", "--T", "4", "--M", "4"], "qexp", 0),
    ("verify thm45", ["verify", "thm45", "--m", "5", "--weight", "10", "--l", "4", "--max-norm", "300"], "thm45", 0),
    ("verify prop53", ["verify", "prop53", "--s", "-5/2", "--t", "-5/2", "--target-bound", "20", "--a-bound", "20"],
     "prop53", 0),
    ("verify modularity", ["verify", "modularity"], "modularity", 0),
    ("verify thm41", ["verify", "thm41", "--T", "8", "--direct-cmax", "100"], "thm41", 0),
    ("verify cor43", ["verify", "cor43"], "kernel_report", 0),
    ("verify lemma51", ["verify", "lemma51", "--M", "10"], "kernel_report", 0),
    ("verify thm54", ["verify", "thm54"], "kernel_report", 0),
    ("verify all quick", ["verify", "all", "--profile", "quick"], "verify_all", 0),
]
for name, args, schema, code in cases:
    r = run(*args)
    check(f"{name} exit {code}", r.returncode == code, r.stderr[:300])
    doc = validate(name, schema, r.stdout)
    if name.startswith("verify") and doc is not None:
        check(f"{name} reports pass", doc.get("pass") is True)

r = run("verify", "all", "--profile", "quick")
ids = [c["id"] for c in json.loads(r.stdout)["criteria"]]
check("quick bundle lists every criterion", ids == list(range(1, 11)))

r = run("verify", "thm45", "--weight", "10", "--l", "4", "--max-norm", "60", "--series", "random")
check("thm45 random series", r.returncode == 0 and json.loads(r.stdout)["pass"])

r = run("verify", "cor43", "--n", "1,1", "--T", "8")
check("insufficient truncation is a usage failure", r.returncode == 2, r.stdout[:200])

for name, args in [
    ("unknown flag", ["field", "info", "--bogus"]),
    ("unknown subcommand", ["frobnicate"]),
    ("missing subcommand", []),
    ("bad field", ["field", "info", "--m", "7"]),
    ("bad ideal", ["hecke", "--ideal", "1:2"]),
    ("bad point", ["poincare", "eval", "--k", "8", "--z", "0,1"]),
    ("point off the upper half plane", ["poincare", "eval", "--k", "8", "--z", "0,-1;0,1"]),
    ("bad format", ["field", "info", "--format", "xml"]),
    ("nonpositive bound", ["ideals", "list", "--max-norm", "0"]),
]:
    r = run(*args)
    check(f"{name} exit 2", r.returncode == 2, r.stdout[:200])
    validate(f"{name} stderr", "error", r.stderr.strip().splitlines()[-1] if r.stderr.strip() else "")

r = run("ideals", "list", "--max-norm", "20", "--format", "csv")
lines = r.stdout.split("\n")
check("csv header row", lines[0] == "g,a,b,norm,generator")
check("csv LF endings", "\r" not in r.stdout and r.stdout.endswith("\n"))
check("csv row count", len(lines) - 2 == len(json.loads(run("ideals", "list", "--max-norm", "20").stdout)["ideals"]))

r = run("verify", "all", "--profile", "quick", "--format", "csv")
check("csv verify all", r.returncode == 0 and r.stdout.startswith("id,name,pass,defect,tolerance\n"))

with tempfile.TemporaryDirectory() as d:
    env = {"HILBERT_CACHE_DIR": d}
    args = ["poincare", "coeffs", "--k", "8", "--T", "6"]
    a = run(*args, env=env)
    files = sorted(Path(d).glob("*.json"))
    check("cache writes one entry", len(files) == 1)
    b = run(*args, env=env)
    check("cache hit is byte-identical", a.stdout == b.stdout and a.returncode == b.returncode == 0)
    c = run(*args, "--no-cache")
    check("cache hit equals recomputation", a.stdout == c.stdout)
    run(*args, "--prec", "256", env=env)
    check("precision changes the key", len(list(Path(d).glob("*.json"))) == 2)
    body = files[0].read_bytes()
    files[0].write_bytes(body[:-20] + b"corrupted!!corrupted!")
    e = run(*args, env=env)
    check("corrupt entry is recomputed", e.returncode == 0 and e.stdout == a.stdout)
    check("corrupt entry is overwritten", files[0].read_bytes() == body)
    check("no temp files left", not list(Path(d).glob("*.tmp.*")))
    x = run("verify", "all", "--profile", "quick", "--cache-dir", d)
    y = run("verify", "all", "--profile", "quick", "--no-cache")
    check("fixed seed gives identical bundles", x.stdout == y.stdout)
    t = run("verify", "all", "--profile", "quick", "--timings", "--cache-dir", d)
    check("timings present on request", all("seconds" in c for c in json.loads(t.stdout)["criteria"]))

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
