# Copyright (c) symreach contributors.
# SPDX-License-Identifier: Apache-2.0
import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np

TOOL = Path(__file__).resolve().parents[1] / "tools" / "convert_network.py"

ACT = {"relu": lambda x: np.maximum(x, 0.0), "tanh": np.tanh, "linear": lambda x: x,
       "sigmoid": lambda x: 1.0 / (1.0 + np.exp(-x))}


def evaluate(net, x):
    for layer in net["layers"]:
        x = ACT[layer["activation"]](np.asarray(layer["weights"]) @ x + np.asarray(layer["bias"]))
    return x


def polar_text(layers, acts, offset, scale):
    widths = [layers[0][0].shape[1]] + [W.shape[0] for W, _ in layers]
    lines = [widths[0], widths[-1], len(layers) - 1, *widths[1:-1], *acts]
    for W, b in layers:
        for i in range(W.shape[0]):
            lines += [repr(float(v)) for v in W[i]] + [repr(float(b[i]))]
    lines += [offset, scale]
    return "\n".join(str(v) for v in lines) + "\n"


class ConvertNetworkTest(unittest.TestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        rng = np.random.default_rng(7)
        self.layers = [(rng.normal(size=(4, 2)), rng.normal(size=4)),
                       (rng.normal(size=(3, 4)), rng.normal(size=3)),
                       (rng.normal(size=(1, 3)), rng.normal(size=1))]

    def run_tool(self, *args):
        out = self.tmp / "net.json"
        subprocess.run([sys.executable, str(TOOL), *map(str, args), str(out)], check=True, capture_output=True)
        return json.loads(out.read_text())

    def reference(self, x, acts):
        for (W, b), a in zip(self.layers, acts):
            x = ACT[a](W @ x + b)
        return x

    def test_polar_with_offset_scale_and_maps(self):
        src = self.tmp / "ctrl.txt"
        src.write_text(polar_text(self.layers, ["ReLU", "tanh", "Affine"], 0.5, 2.0))
        imap = self.tmp / "map.json"
        M = np.array([[1.0, 0.0, -1.0], [0.0, 2.0, 0.0]])
        m = np.array([30.0, 1.4])
        imap.write_text(json.dumps({"matrix": M.tolist(), "offset": m.tolist()}))
        net = self.run_tool("--format", "polar", "--input-map", imap, "--output-offset", -10, src)
        self.assertEqual(len(net["layers"]), 3)
        self.assertEqual(len(net["layers"][0]["weights"][0]), 3)
        for x in np.random.default_rng(1).normal(size=(20, 3)):
            want = (self.reference(M @ x + m, ["relu", "tanh", "linear"]) - 0.5) * 2.0 - 10.0
            np.testing.assert_allclose(evaluate(net, x), want, rtol=1e-12, atol=1e-12)

    def test_sherlock_nonlinear_output_gets_affine_layer(self):
        src = self.tmp / "ctrl.txt"
        text = polar_text(self.layers, [], 0.0, 1.0)
        src.write_text(text)
        net = self.run_tool("--format", "sherlock", "--hidden-activation", "relu", "--output-scale", 3, src)
        self.assertEqual([l["activation"] for l in net["layers"]], ["relu", "relu", "linear"])
        x = np.array([0.3, -0.2])
        np.testing.assert_allclose(evaluate(net, x), 3.0 * self.reference(x, ["relu", "relu", "linear"]),
                                   rtol=1e-12)

    def test_truncated_file_is_rejected(self):
        src = self.tmp / "ctrl.txt"
        src.write_text(polar_text(self.layers, ["ReLU", "ReLU", "Affine"], 0.0, 1.0).rsplit("\n", 6)[0])
        with self.assertRaises(subprocess.CalledProcessError):
            self.run_tool("--format", "polar", src)


if __name__ == "__main__":
    unittest.main()
