"""End-to-end checks of the apdperm command-line tool.

The binary path comes from the APDPERM environment variable (set by ctest).
"""

import json
import os
import subprocess

BIN = os.environ["APDPERM"]

PRIMES_31_97 = [31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


def run(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [BIN, *args], capture_output=True, text=True, timeout=300, env=env
    )


def test_gen_emits_verified_record_with_perm():
    res = run("gen", "8")
    assert res.returncode == 0
    record = json.loads(res.stdout)
    assert record["command"] == "gen"
    assert record["n"] == 8
    assert record["seed"] == 0
    assert record["verified"] is True
    assert record["preserved_count"] == 0
    assert record["plan"], "plan rows expected"
    assert sorted(record["perm"]["image"]) == list(range(8))
    assert isinstance(record["version"], str)


def test_gen_out_then_verify_roundtrip(tmp_path):
    out = tmp_path / "perm12.json"
    res = run("gen", "12", "--out", str(out))
    assert res.returncode == 0
    assert json.loads(res.stdout)["file"] == str(out)

    check = run("verify", str(out))
    assert check.returncode == 0
    record = json.loads(check.stdout)
    assert record["n"] == 12
    assert record["preserved_count"] == 0
    assert record["verified"] is True


def test_gen_refuses_impossible_orders():
    res = run("gen", "5")
    assert res.returncode == 2
    assert "unsupported" in res.stderr


def test_gen_handles_the_trivial_order():
    res = run("gen", "1")
    assert res.returncode == 0
    assert json.loads(res.stdout)["perm"]["image"] == [0]


def test_gen_no_verify_reports_unknown_count():
    res = run("gen", "16", "--no-verify")
    assert res.returncode == 0
    record = json.loads(res.stdout)
    assert record["verified"] is False
    assert record["preserved_count"] is None


def test_verify_counts_identity_classes(tmp_path):
    path = tmp_path / "identity6.txt"
    path.write_text("6\n0 1 2 3 4 5\n")
    res = run("verify", str(path))
    assert res.returncode == 1
    record = json.loads(res.stdout)
    assert record["preserved_count"] == 18
    assert record["verified"] is False
    assert len(record["preserved"]) == 18


def test_verify_rejects_malformed_input(tmp_path):
    path = tmp_path / "garbage.txt"
    path.write_text("not a permutation\n")
    res = run("verify", str(path))
    assert res.returncode == 1
    assert res.stderr.startswith("error:")


def test_params_cases():
    res = run("params", "3p", "31")
    assert res.returncode == 0
    record = json.loads(res.stdout)
    assert record["t"] >= 2
    assert "y" not in record

    res = run("params", "2p", "503")
    assert res.returncode == 0
    assert json.loads(res.stdout)["y"] >= 2

    assert run("params", "7p", "67").returncode == 0
    assert run("params", "5p", "499").returncode == 2


def test_charsum_emits_passing_csv():
    res = run("charsum", "2p-t", "31", "97")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "p,sum_id,sum,bound,pass"
    rows = [line.split(",") for line in lines[1:]]
    assert [int(r[0]) for r in rows] == PRIMES_31_97
    assert all(r[1] == "2p-t" for r in rows)
    assert all(r[4] == "1" for r in rows)


def test_charsum_empty_range_is_header_only():
    res = run("charsum", "2p-t", "32", "36")
    assert res.returncode == 0
    assert res.stdout.strip() == "p,sum_id,sum,bound,pass"


def test_descent_success_and_failure():
    res = run("descent", "4", "--seed", "0")
    assert res.returncode == 0
    record = json.loads(res.stdout)
    assert record["success"] is True
    assert len(record["perm"]["image"]) == 4

    res = run("descent", "7")
    assert res.returncode == 1
    assert json.loads(res.stdout)["success"] is False


def test_abelian_gen_then_verify(tmp_path):
    out = tmp_path / "g335.json"
    res = run("abelian", "3 x 3 x 5", "gen", "--out", str(out))
    assert res.returncode == 0
    record = json.loads(res.stdout)
    assert record["group"] == "3 x 3 x 5"
    assert record["order"] == 45

    check = run("abelian", "3 x 3 x 5", "verify", str(out))
    assert check.returncode == 0
    assert json.loads(check.stdout)["preserved_count"] == 0


def test_plain_format(tmp_path):
    out = tmp_path / "perm8.txt"
    res = run("gen", "8", "--format", "plain", "--out", str(out))
    assert res.returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "8"
    assert len(lines[1].split()) == 8
    assert run("verify", str(out)).returncode == 0

    bare = run("gen", "8", "--format", "plain")
    assert bare.returncode == 0
    assert bare.stdout.split()[0] == "8"
    assert json.loads(bare.stderr)["verified"] is True


def test_cache_dir_env_is_honored(tmp_path):
    cache = tmp_path / "cache"
    res = run("gen", "45", env_extra={"APDPERM_CACHE_DIR": str(cache)})
    assert res.returncode == 0
    assert (cache / "n45.perm").is_file()

    again = run("gen", "45", env_extra={"APDPERM_CACHE_DIR": str(cache)})
    assert again.returncode == 0
    used = {row["used"] for row in json.loads(again.stdout)["plan"]}
    assert used == {"cache"}
