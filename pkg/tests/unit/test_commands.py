import contextlib
import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch, MagicMock

import rankmetric.commands.main as main_module
from rankmetric.field import FieldSpec, convert_basis, get_field
from rankmetric.kk import WORKED_EXAMPLE_CODEWORD
from rankmetric.utils.readers import (
    MatrixParsers,
    VectorParsers,
    read_field_record,
    write_field_record,
)

_dir = os.path.join(os.path.dirname(__file__), "../artifacts", "worked_example")
G8_H = (2, 4, 16, 169, 24, 233, 205, 130)


def capture(func, *args, **kwargs):
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        status = func(*args, **kwargs)
    return status, buffer.getvalue()


class TestMainModule(unittest.TestCase):

    @patch("rankmetric.commands.main.Simulation")
    @patch("rankmetric.commands.main.generate_report")
    def test_simulate(self, mock_generate_report, mock_simulation):
        mock_sim_instance = MagicMock()
        mock_sim_instance.to_csv.return_value = "tau,trials\n0,3\n"
        mock_simulation.from_yml.return_value = mock_sim_instance

        status, out = capture(main_module.simulate, config="dummy_config", trials=3)

        mock_simulation.from_yml.assert_called_once_with(
            "dummy_config", preset=None, mode=None, trials=3, seed=None, workers=None
        )
        mock_sim_instance.set_tasks.assert_called_once()
        mock_sim_instance.run.assert_called_once()
        mock_generate_report.assert_called_once_with(mock_sim_instance)
        self.assertEqual(out, "tau,trials\n0,3\n")
        self.assertEqual(status, 0)

    @patch("rankmetric.commands.main.Simulation")
    @patch("rankmetric.commands.main.generate_report")
    def test_simulate_without_config(self, mock_generate_report, mock_simulation):
        mock_simulation.return_value.to_csv.return_value = ""
        capture(main_module.simulate, mode="kk", seed=4, key_solver="ibma")
        kwargs = mock_simulation.call_args.kwargs
        self.assertEqual(kwargs["preset"], "g8")
        self.assertEqual(kwargs["mode"], "kk")
        self.assertEqual(kwargs["seed"], 4)
        self.assertEqual(kwargs["key_solver"], "ibma")
        self.assertNotIn("trials", kwargs)
        mock_generate_report.assert_called_once_with(mock_simulation.return_value)

    def test_example_stages(self):
        status, out = capture(main_module.example, dump_stages=True)
        with open(os.path.join(_dir, "stages.txt")) as f_:
            golden = f_.read()
        self.assertEqual(
            out,
            golden
            + "3'    E' = (254,157,4,251)\n"
            + "4(a)' X' = (205,130,204,1)\n"
            + "4(b)' L' = (64,128,191,255)\n"
            + "4(c)' e' = (255,255,255,255,255,255,5,98)\n",
        )
        self.assertEqual(status, 0)

    def test_example_text(self):
        _, out = capture(main_module.example)
        self.assertEqual(out, "x_hat = (36,28,200,56,228,208,5,98)\n")

    def test_example_json(self):
        _, out = capture(main_module.example, dump_stages=True, format="json")
        record = json.loads(out)
        self.assertTrue(record["success"])
        self.assertTrue(record["matches_truth"])
        self.assertEqual(record["codeword"], list(WORKED_EXAMPLE_CODEWORD))
        self.assertEqual(record["stages"][0], "1(a)  S = (185,169,45,130)")

    def test_code(self):
        _, out = capture(main_module.code, preset="g8", format="json")
        record = json.loads(out)
        self.assertEqual((record["n"], record["k"], record["d"]), (8, 4, 5))
        self.assertEqual(record["h"], [2, 4, 16, 169, 24, 233, 205, 130])
        self.assertEqual(len(record["G"]), 4)
        _, out = capture(main_module.code, preset="g8", format="text")
        self.assertIn("field: 8 0x1a9 polynomial\n", out)

    def test_code_file(self):
        fname = os.path.join(os.path.dirname(__file__), "../artifacts", "code_g4.yml")
        _, out = capture(main_module.code, code=fname, format="csv")
        self.assertTrue(out.startswith("n,k,m,d,t,field,h\n4,2,4,3,1,"))

    def test_bad_format(self):
        with self.assertRaises(ValueError):
            main_module.code(format="xml")


class TestWorkflow(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_encode(self):
        status, out = capture(
            main_module.encode, os.path.join(_dir, "message.txt"), output=self.path("x.txt")
        )
        self.assertEqual(status, 0)
        self.assertEqual(out, "36,28,200,56,228,208,5,98\n")
        self.assertEqual(VectorParsers.read(self.path("x.txt")), list(WORKED_EXAMPLE_CODEWORD))
        lifted, _ = MatrixParsers.read(self.path("x.mat"))
        self.assertEqual(lifted.shape, (8, 16))

    def test_field_record_roundtrip(self):
        capture(main_module.code, preset="g8", output=self.path("field.txt"))
        self.assertEqual(
            read_field_record(self.path("field.txt")), FieldSpec(8, 0x1A9)
        )

    def test_encode_over_normal_basis(self):
        poly_field = get_field(FieldSpec(8, 0x1A9))
        normal_field = get_field(FieldSpec.normal(8, 0x1A9))
        write_field_record(self.path("normal.txt"), normal_field.spec)
        _, out = capture(
            main_module.code, preset="g8", field=self.path("normal.txt"), format="json"
        )
        record = json.loads(out)
        self.assertTrue(record["field"].startswith("8 0x1a9 normal"))
        self.assertEqual(
            record["h"], [convert_basis(v, poly_field, normal_field) for v in G8_H]
        )

        message = VectorParsers.read(os.path.join(_dir, "message.txt"))
        VectorParsers.write(
            self.path("message.txt"),
            [convert_basis(v, poly_field, normal_field) for v in message],
        )
        _, out = capture(
            main_module.encode, self.path("message.txt"), field=self.path("normal.txt")
        )
        expected = [convert_basis(v, poly_field, normal_field) for v in WORKED_EXAMPLE_CODEWORD]
        self.assertEqual(VectorParsers.parse(out), expected)

    def test_lift(self):
        VectorParsers.write(self.path("x.txt"), WORKED_EXAMPLE_CODEWORD)
        _, out = capture(main_module.lift, self.path("x.txt"))
        self.assertTrue(out.startswith("8 16\n2401\n"))

    def test_kk_roundtrip(self):
        VectorParsers.write(self.path("x.txt"), WORKED_EXAMPLE_CODEWORD)
        capture(
            main_module.corrupt,
            self.path("x.txt"),
            epsilon=1,
            mu=1,
            delta=1,
            seed=7,
            output=self.path("rx.mat"),
        )
        with open(self.path("rx.json")) as f_:
            truth = json.load(f_)
        self.assertEqual((truth["epsilon"], truth["mu"], truth["delta"]), (1, 1, 1))

        status, out = capture(main_module.decode, self.path("rx.mat"))
        record = json.loads(out)
        self.assertEqual(status, 0)
        self.assertTrue(record["matches_truth"])
        self.assertEqual(record["mu"], 1)

    def test_gabidulin_roundtrip(self):
        VectorParsers.write(self.path("x.txt"), WORKED_EXAMPLE_CODEWORD)
        capture(main_module.corrupt, self.path("x.txt"), tau=2, seed=3, output=self.path("r.txt"))
        status, out = capture(main_module.decode, self.path("r.txt"), key_solver="ibma")
        record = json.loads(out)
        self.assertEqual(status, 0)
        self.assertEqual(record["error"]["tau"], 2)
        self.assertTrue(record["matches_truth"])

    def test_decode_stages_text(self):
        status, out = capture(
            main_module.decode, os.path.join(_dir, "received.mat"), dump_stages=True, format="text"
        )
        self.assertEqual(status, 0)
        self.assertTrue(out.startswith("1(a)  S = (185,169,45,130)\n"))
        self.assertIn("matches_truth: True\n", out)

    def test_decode_failure(self):
        VectorParsers.write(self.path("x.txt"), WORKED_EXAMPLE_CODEWORD)
        capture(
            main_module.corrupt, self.path("x.txt"), mu=3, delta=2, output=self.path("rx.mat")
        )
        status, out = capture(main_module.decode, self.path("rx.mat"), format="csv")
        self.assertEqual(status, 1)
        self.assertIn("budget_exceeded", out)

    def test_cartesian(self):
        matrix, _ = MatrixParsers.read(os.path.join(_dir, "received.mat"))
        wide = matrix.hstack(matrix.columns(8))
        MatrixParsers.write(self.path("wide.mat"), wide, 2)
        status, out = capture(main_module.decode, self.path("wide.mat"), workers=2)
        records = json.loads(out)
        self.assertEqual(status, 0)
        self.assertEqual([r["block"] for r in records], [0, 1])
        for r in records:
            self.assertEqual(r["codeword"], list(WORKED_EXAMPLE_CODEWORD))


class TestEntryPoint(unittest.TestCase):

    def run_cli(self, *argv):
        with patch("sys.argv", ["rankmetric", *argv]):
            with contextlib.redirect_stdout(io.StringIO()):
                with self.assertRaises(SystemExit) as ctx:
                    main_module.rankmetric()
        return ctx.exception.code

    def test_success(self):
        self.assertEqual(self.run_cli("example", "--format", "json"), 0)

    def test_input_error(self):
        self.assertEqual(self.run_cli("decode", "missing_file.mat"), 2)
        self.assertEqual(self.run_cli("code", "--preset", "g32"), 2)

    def test_missing_input(self):
        with contextlib.redirect_stderr(io.StringIO()):
            self.assertEqual(self.run_cli("decode"), 2)

    def test_decode_failure(self):
        with tempfile.TemporaryDirectory() as tmp:
            VectorParsers.write(os.path.join(tmp, "x.txt"), WORKED_EXAMPLE_CODEWORD)
            rx = os.path.join(tmp, "rx.mat")
            self.run_cli("corrupt", os.path.join(tmp, "x.txt"), "--mu", "3", "--delta", "2", "--output", rx)
            self.assertEqual(self.run_cli("decode", rx), 1)

    @patch("rankmetric.commands.main.set_console_log_level")
    def test_debug(self, mock_level):
        self.run_cli("code", "-d")
        mock_level.assert_called_once_with("DEBUG")


if __name__ == "__main__":
    unittest.main()
