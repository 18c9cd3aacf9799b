import json
import os
import sys
import tempfile
import unittest

import numpy as np
import pandas as pd

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.domain.compact import phase_diagram
from src.domain.errors import ArtifactFormatError, ArtifactIOError
from src.domain.schemas import AxisSpec, DickeState, RbmParameters
from src.domain.states import sample_measurements
from src.services.storage import (
    PhaseDiagramCsvWriter, load_weights, read_json, read_samples, read_table, save_weights,
    sector_color, write_heatmap_csv, write_json, write_pgm, write_phase_ppm, write_samples, write_table,
)


class TestSampleFiles(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "samples.txt")

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, text):
        with open(self.path, "w") as f:
            f.write(text)

    def test_written_format(self):
        samples = sample_measurements(DickeState(n_qubits=4, dicke_index=1), 5, seed=1)
        write_samples(self.path, samples)
        with open(self.path) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 5)
        for line in lines:
            self.assertRegex(line, r"^[01]( [01]){3}$")

    def test_read_back(self):
        samples = sample_measurements(DickeState(n_qubits=6, dicke_index=2), 300, seed=2)
        write_samples(self.path, samples)
        loaded = read_samples(self.path, seed=2)
        np.testing.assert_array_equal(loaded.samples, samples.samples)
        self.assertEqual(loaded.seed, 2)
        self.assertEqual(loaded.source, "samples.txt")

    def test_blank_lines_are_skipped(self):
        self._write("0 1\n\n1 0\n")
        self.assertEqual(read_samples(self.path).count, 2)

    def test_bad_token_reports_line_and_column(self):
        self._write("0 1 0\n0 2 1\n")
        with self.assertRaises(ArtifactFormatError) as ctx:
            read_samples(self.path)
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 3)
        self.assertEqual(ctx.exception.context, "0 2 1")
        self.assertIn(":2:3", str(ctx.exception))

    def test_width_mismatch(self):
        self._write("0 1 0\n0 1\n")
        with self.assertRaises(ArtifactFormatError) as ctx:
            read_samples(self.path)
        self.assertEqual(ctx.exception.line, 2)

    def test_empty_file(self):
        self._write("\n")
        with self.assertRaises(ArtifactFormatError):
            read_samples(self.path)

    def test_missing_file(self):
        with self.assertRaises(ArtifactIOError):
            read_samples(os.path.join(self.tmp.name, "missing.txt"))


class TestJsonAndWeights(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_floats_round_trip_exactly(self):
        path = os.path.join(self.tmp.name, "values.json")
        values = {"third": 1 / 3, "tiny": 5e-324, "array": np.array([0.1, 0.2]), "count": np.int64(3)}
        write_json(path, values)
        loaded = read_json(path)
        self.assertEqual(loaded["third"], 1 / 3)
        self.assertEqual(loaded["tiny"], 5e-324)
        self.assertEqual(loaded["array"], [0.1, 0.2])
        self.assertEqual(loaded["count"], 3)

    def test_malformed_json_points_at_line(self):
        path = os.path.join(self.tmp.name, "broken.json")
        with open(path, "w") as f:
            f.write('{\n  "W": [[1.0]],\n  "a": [0.0,,]\n}\n')
        with self.assertRaises(ArtifactFormatError) as ctx:
            read_json(path)
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn('"a"', ctx.exception.context)

    def test_weights_round_trip(self):
        path = os.path.join(self.tmp.name, "nested", "weights.json")
        rng = np.random.default_rng(0)
        rbm = RbmParameters.initialize(3, 2, 0.5, rng)
        save_weights(path, rbm, {"seed": 4})
        loaded, metadata = load_weights(path)
        np.testing.assert_array_equal(loaded.weights, rbm.weights)
        self.assertEqual(metadata, {"seed": 4})
        with open(path) as f:
            document = json.load(f)
        self.assertEqual((document["n_visible"], document["n_hidden"]), (3, 2))

    def test_weights_missing_field(self):
        path = os.path.join(self.tmp.name, "weights.json")
        write_json(path, {"W": [[1.0]], "a": [0.0]})
        with self.assertRaises(ArtifactFormatError):
            load_weights(path)

    def test_weights_inconsistent_shapes(self):
        path = os.path.join(self.tmp.name, "weights.json")
        write_json(path, {"W": [[1.0, 2.0]], "a": [0.0, 1.0], "b": [0.0, 0.0]})
        with self.assertRaises(ArtifactFormatError):
            load_weights(path)


class TestTablesAndImages(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_table_keeps_full_precision(self):
        path = os.path.join(self.tmp.name, "table.csv")
        write_table(path, pd.DataFrame({"value": [1 / 3, -1 / 15]}))
        loaded = read_table(path)
        self.assertEqual(loaded["value"].tolist(), [1 / 3, -1 / 15])

    def test_heatmap_csv(self):
        path = os.path.join(self.tmp.name, "heatmap.csv")
        write_heatmap_csv(path, np.array([[1.0, -2.0], [0.5, 3.0], [0.0, 0.0]]))
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines, ["1,-2", "0.5,3", "0,0"])

    def test_pgm(self):
        path = os.path.join(self.tmp.name, "weights.pgm")
        write_pgm(path, np.array([[0.0, 1.0, 2.0], [2.0, 1.0, 0.0]]))
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "P2")
        self.assertTrue(lines[1].startswith("#"))
        self.assertEqual(lines[2], "3 2")
        self.assertEqual(lines[3], "255")
        self.assertEqual(lines[4], "0 128 255")

    def test_phase_diagram_outputs(self):
        w_min_axis = AxisSpec.from_count(-4.0, -0.5, 6)
        w_max_axis = AxisSpec.from_count(0.5, 30.0, 4)
        path = os.path.join(self.tmp.name, "grid.csv")
        with PhaseDiagramCsvWriter(path, w_min_axis.values()) as writer:
            grid = phase_diagram(5, w_min_axis, w_max_axis, row_sink=writer)
        self.assertEqual(writer.rows_written, 4)

        table = pd.read_csv(path)
        self.assertEqual(list(table.columns), PhaseDiagramCsvWriter.COLUMNS)
        self.assertEqual(len(table), 24)
        np.testing.assert_array_equal(table["best_D"].to_numpy().reshape(4, 6), grid.best_d)

        ppm = os.path.join(self.tmp.name, "grid.ppm")
        write_phase_ppm(ppm, grid)
        with open(ppm, "rb") as f:
            data = f.read()
        header = b"P6\n6 4\n255\n"
        self.assertTrue(data.startswith(header))
        self.assertEqual(len(data), len(header) + 6 * 4 * 3)

    def test_interrupted_grid_leaves_no_csv(self):
        w_min_axis = AxisSpec.from_count(-4.0, -0.5, 6)
        path = os.path.join(self.tmp.name, "grid.csv")
        row = (np.zeros(6, dtype=int), np.ones(6), np.zeros(6, dtype=bool))
        with self.assertRaises(KeyboardInterrupt):
            with PhaseDiagramCsvWriter(path, w_min_axis.values()) as writer:
                writer(0, 1.0, *row)
                self.assertTrue(os.path.exists(writer.partial_path))
                raise KeyboardInterrupt
        self.assertEqual(writer.rows_written, 1)
        self.assertFalse(os.path.exists(path))
        self.assertEqual(os.listdir(self.tmp.name), [])

    def test_completed_grid_replaces_previous_csv(self):
        path = os.path.join(self.tmp.name, "grid.csv")
        with open(path, "w") as f:
            f.write("stale\n")
        with PhaseDiagramCsvWriter(path, np.array([-1.0, -0.5])) as writer:
            writer(0, 2.0, np.array([1, 1]), np.array([0.9, 0.8]), np.array([False, True]))
            with open(path) as f:
                self.assertEqual(f.read(), "stale\n")
        table = pd.read_csv(path)
        self.assertEqual(table["tie"].tolist(), [0, 1])
        self.assertEqual(os.listdir(self.tmp.name), ["grid.csv"])

    def test_sector_colors(self):
        self.assertEqual(sector_color(-1, 8), (255, 255, 255))
        self.assertEqual(sector_color(0, 8), (0, 0, 255))
        self.assertEqual(sector_color(8, 8), (255, 0, 0))


if __name__ == '__main__':
    unittest.main()
