"""Golden CLI invocations: exit codes and stdout are pinned bit-exact."""

from conftest import run_cli

MEDIAL = "F(F(u,v),F(x,y)) = F(F(u,x),F(v,y))"
PROP32 = "F(x,y) = F(x,z) -> F(x,y) = F(x,G(y,z))"
SD_JOIN = "join(x,y) = join(x,z) -> join(x,y) = join(x, meet(y,z))"


def test_check_medial_holds(alg_dir):
    r = run_cli(["check", alg_dir / "z2.alg", "--formula", MEDIAL, "--mode", "hyper"])
    assert (r.returncode, r.stdout) == (0, "")


def test_check_commutativity_hyper_witness(alg_dir):
    r = run_cli(
        ["check", alg_dir / "z2.alg", "--formula", "F(x,y) = F(y,x)", "--mode", "hyper"]
    )
    assert r.returncode == 1
    assert r.stdout == "WITNESS sigma{F:=x1} asg{x:=0,y:=1} eq=0\n"


def test_check_prop32_file_hyperquasi(alg_dir, tmp_path):
    horn = tmp_path / "sd.horn"
    horn.write_text("# semidistributivity, hyper form\n%s\n" % PROP32)
    r = run_cli(
        ["check", alg_dir / "m3.alg", "--formula", "@%s" % horn, "--mode", "hyperquasi"]
    )
    assert r.returncode == 1
    assert (
        r.stdout
        == "WITNESS sigma{F:=join(x1,x2),G:=meet(x1,x2)} asg{x:=1,y:=2,z:=3} eq=0\n"
    )


def test_check_arity_error(alg_dir):
    r = run_cli(["check", alg_dir / "z2.alg", "--formula", "plus(x)", "--mode", "id"])
    assert r.returncode == 2
    assert "arity clash" in r.stderr


def test_check_band_commutativity_id(alg_dir):
    r = run_cli(
        ["check", alg_dir / "rb22.alg", "--formula", "dot(x,y) = dot(y,x)", "--mode", "id"]
    )
    assert r.returncode == 1
    assert r.stdout == "WITNESS asg{x:=0,y:=1} eq=0\n"


def test_check_sd_quasi_m3(alg_dir):
    r = run_cli(["check", alg_dir / "m3.alg", "--formula", SD_JOIN, "--mode", "quasi"])
    assert r.returncode == 1
    assert r.stdout == "WITNESS asg{x:=1,y:=2,z:=3} eq=0\n"


def test_check_sd_quasi_n5_holds(alg_dir):
    r = run_cli(["check", alg_dir / "n5.alg", "--formula", SD_JOIN, "--mode", "quasi"])
    assert (r.returncode, r.stdout) == (0, "")


def test_check_mode_mismatch(alg_dir):
    r = run_cli(
        ["check", alg_dir / "z2.alg", "--formula", "F(x,y) = F(y,x)", "--mode", "id"]
    )
    assert r.returncode == 2 and "hyper" in r.stderr
    r = run_cli(
        ["check", alg_dir / "z2.alg", "--formula", "x = y -> x = y", "--mode", "hyper"]
    )
    assert r.returncode == 2 and "premises" in r.stderr


def test_check_replay_confirms(alg_dir):
    r = run_cli(
        [
            "check",
            alg_dir / "z2.alg",
            "--formula",
            "F(x,y) = F(y,x)",
            "--mode",
            "hyper",
            "--replay",
        ]
    )
    assert r.returncode == 1
    assert r.stdout == (
        "WITNESS sigma{F:=x1} asg{x:=0,y:=1} eq=0\n" "REPLAY confirmed\n"
    )


def test_check_multi_formula_file_indexes_failures(alg_dir, tmp_path):
    horn = tmp_path / "two.horn"
    horn.write_text("plus(x,y) = plus(y,x)\nplus(x,x) = x\n")
    r = run_cli(
        [
            "check",
            alg_dir / "z2.alg",
            "--formula",
            "@%s" % horn,
            "--mode",
            "id",
            "--replay",
        ]
    )
    assert r.returncode == 1
    assert r.stdout == "WITNESS asg{x:=1} eq=1\nREPLAY confirmed\n"


def test_check_witness_cap(alg_dir):
    r = run_cli(
        [
            "check",
            alg_dir / "z2.alg",
            "--formula",
            "F(x,y) = F(y,x)",
            "--mode",
            "hyper",
            "--witness-cap",
            "10",
            "--replay",
        ]
    )
    assert r.returncode == 1
    lines = r.stdout.splitlines()
    assert lines.count("REPLAY confirmed") == 4
    assert lines[0] == "WITNESS sigma{F:=x1} asg{x:=0,y:=1} eq=0"
    assert lines[2] == "WITNESS sigma{F:=x1} asg{x:=1,y:=0} eq=0"
    assert lines[4] == "WITNESS sigma{F:=x2} asg{x:=0,y:=1} eq=0"


def test_check_empty_sigma_block(alg_dir):
    # hyper modes may take a formula with no hypervariables
    r = run_cli(
        [
            "check",
            alg_dir / "z2.alg",
            "--formula",
            "plus(x,x) = x",
            "--mode",
            "hyperquasi",
            "--replay",
        ]
    )
    assert r.returncode == 1
    assert r.stdout == "WITNESS sigma{} asg{x:=1} eq=0\nREPLAY confirmed\n"
    # same shape through the multi-witness path
    r = run_cli(
        [
            "check",
            alg_dir / "z2.alg",
            "--formula",
            "plus(x,x) = x",
            "--mode",
            "hyperquasi",
            "--witness-cap",
            "3",
            "--replay",
        ]
    )
    assert r.returncode == 1
    assert r.stdout == "WITNESS sigma{} asg{x:=1} eq=0\nREPLAY confirmed\n"


def test_check_max_arity_refusal(alg_dir):
    r = run_cli(
        [
            "check",
            alg_dir / "z2.alg",
            "--formula",
            "F(x,y) = F(y,x)",
            "--mode",
            "hyper",
            "--max-arity",
            "1",
        ]
    )
    assert r.returncode == 2 and "max-arity" in r.stderr


def test_clone_z2_binary(alg_dir):
    r = run_cli(["clone", alg_dir / "z2.alg", "--arity", "2"])
    assert r.returncode == 0
    assert r.stdout == (
        "0 0 0 0 0 zero()\n"
        "1 0 0 1 1 x1\n"
        "2 0 1 0 1 x2\n"
        "3 0 1 1 0 plus(x1,x2)\n"
    )


def test_clone_chain2_unary(alg_dir):
    r = run_cli(["clone", alg_dir / "chain2.alg", "--arity", "1"])
    assert (r.returncode, r.stdout) == (0, "0 0 1 x1\n")


def test_clone_limit_flag_beats_env(alg_dir):
    r = run_cli(["clone", alg_dir / "z6.alg", "--arity", "2", "--max-clone-ops", "10"])
    assert r.returncode == 2 and "clone limit exceeded" in r.stderr
    import os
    import subprocess
    import sys

    env = dict(os.environ, HYPERQ_BACKEND="numpy", HYPERQ_MAX_CLONE_OPS="10")
    r = subprocess.run(
        [sys.executable, "-m", "hyperq.cli", "clone", str(alg_dir / "z6.alg"), "--arity", "2"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert r.returncode == 2 and "clone limit exceeded" in r.stderr
    r = subprocess.run(
        [
            sys.executable,
            "-m",
            "hyperq.cli",
            "clone",
            str(alg_dir / "z6.alg"),
            "--arity",
            "2",
            "--max-clone-ops",
            "100",
        ],
        capture_output=True,
        text=True,
        env=env,
    )
    assert r.returncode == 0 and len(r.stdout.splitlines()) == 36


def test_catalog_list():
    r = run_cli(["catalog", "list"])
    assert r.returncode == 0
    assert r.stdout.split() == [
        "chain2",
        "m3",
        "n5",
        "rb11",
        "rb12",
        "rb22",
        "rb23",
        "s3",
        "z1",
        "z2",
        "z3",
        "z4",
        "z5",
        "z6",
    ]


def test_catalog_show_z2():
    r = run_cli(["catalog", "show", "z2"])
    assert r.returncode == 0
    assert r.stdout == (
        "algebra z2\n"
        "size 2\n"
        "op plus 2\n"
        "table 0 1 1 0\n"
        "op neg 1\n"
        "table 0 1\n"
        "op zero 0\n"
        "table 0\n"
    )


def test_catalog_show_unknown():
    r = run_cli(["catalog", "show", "nope"])
    assert r.returncode == 2 and "unknown catalog" in r.stderr
    r = run_cli(["catalog", "show"])
    assert r.returncode == 2


def test_abelian_z4(alg_dir):
    r = run_cli(["abelian", alg_dir / "z4.alg"])
    assert (r.returncode, r.stdout) == (0, "")


def test_abelian_s3_witness(alg_dir):
    r = run_cli(["abelian", alg_dir / "s3.alg", "--max-arity", "2", "--replay"])
    assert r.returncode == 1
    assert r.stdout == (
        "WITNESS term=plus(neg(x2),plus(x1,x2)) u=0 v=1 xs=0 ys=2 dir=fwd\n"
        "REPLAY confirmed\n"
    )


def test_product_z2_z2(alg_dir):
    r = run_cli(["product", alg_dir / "z2.alg", alg_dir / "z2.alg", "--name", "k4"])
    assert r.returncode == 0
    assert r.stdout == (
        "algebra k4\n"
        "size 4\n"
        "op plus 2\n"
        "table 0 1 2 3 1 0 3 2 2 3 0 1 3 2 1 0\n"
        "op neg 1\n"
        "table 0 1 2 3\n"
        "op zero 0\n"
        "table 0\n"
    )


def test_subalgebras_chain2(alg_dir):
    r = run_cli(["subalgebras", alg_dir / "chain2.alg"])
    assert (r.returncode, r.stdout) == (0, "{0}\n{1}\n{0,1}\n")


def test_reduced_product_ultra(alg_dir):
    r = run_cli(
        [
            "reduced-product",
            alg_dir / "z2.alg",
            alg_dir / "z4.alg",
            "--filter",
            "0,1;1",
            "--ultra",
            "--name",
            "u",
        ]
    )
    assert r.returncode == 0
    assert r.stdout == (
        "algebra u\n"
        "size 4\n"
        "op plus 2\n"
        "table 0 1 2 3 1 2 3 0 2 3 0 1 3 0 1 2\n"
        "op neg 1\n"
        "table 0 3 2 1\n"
        "op zero 0\n"
        "table 0\n"
    )


def test_reduced_product_full_filter(alg_dir):
    r = run_cli(
        [
            "reduced-product",
            alg_dir / "z2.alg",
            alg_dir / "z4.alg",
            "--filter",
            "0,1",
        ]
    )
    assert r.returncode == 0
    assert "size 8" in r.stdout


def test_reduced_product_rejects_non_ultrafilter(alg_dir):
    r = run_cli(
        [
            "reduced-product",
            alg_dir / "z2.alg",
            alg_dir / "z4.alg",
            "--filter",
            "0,1",
            "--ultra",
        ]
    )
    assert r.returncode == 2 and "not an ultrafilter" in r.stderr


def test_reduced_product_bad_filter(alg_dir):
    r = run_cli(
        [
            "reduced-product",
            alg_dir / "z2.alg",
            alg_dir / "z4.alg",
            "--filter",
            "0;1",
        ]
    )
    assert r.returncode == 2 and "full index set" in r.stderr


def test_missing_file():
    r = run_cli(["check", "no-such.alg", "--formula", "x = x", "--mode", "id"])
    assert r.returncode == 2


def test_derived_z2_count(alg_dir):
    r = run_cli(["derived", alg_dir / "z2.alg"])
    assert r.returncode == 0
    headers = [l for l in r.stdout.splitlines() if l.startswith("#")]
    assert len(headers) == 8
    assert headers[0] == "# 0 sigma{neg:=zero(),plus:=zero(),zero:=zero()}"


def test_verify_sec1_output():
    r = run_cli(["verify", "sec1"])
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert len(lines) == 10
    assert lines[0] == "CHECK sec1:z2:medial PASS"
    assert all(line.startswith("CHECK sec1:") and " PASS" in line for line in lines)


def test_verify_sec3_passes():
    r = run_cli(["verify", "sec3"])
    assert r.returncode == 0
    assert all(" PASS" in line for line in r.stdout.splitlines())


def test_verify_prop41_single_algebra(alg_dir):
    r = run_cli(["verify", "prop41", "--algebra", alg_dir / "z2.alg"])
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "CHECK prop41:z2:derived PASS count=8 slices=4x2x1"
    assert len(lines) == 7
