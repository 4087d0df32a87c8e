#!/usr/bin/env python3
# Copyright (c) symreach contributors.
# SPDX-License-Identifier: Apache-2.0
"""Convert controller files from common benchmark formats to the symreach network JSON.

Supported inputs:
  polar     plain-text layer list with activation names (one per layer) followed
            by per-neuron weights and bias, then an output offset and scale
  sherlock  the same layout without activation lines; hidden layers use
            --hidden-activation and the output layer is affine
  mat       MATLAB file with cell arrays W and b (and optionally act_fcns)

Optional affine maps are folded into the network:
  --input-map FILE      network input = matrix @ state + offset (JSON {"matrix", "offset"})
  --output-offset V     added to every output (after the file's own offset/scale)
  --output-scale V      multiplies every output before --output-offset
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

ACTIVATIONS = {
    "relu": "relu",
    "tanh": "tanh",
    "sigmoid": "sigmoid",
    "logsig": "sigmoid",
    "tansig": "tanh",
    "poslin": "relu",
    "affine": "linear",
    "linear": "linear",
    "purelin": "linear",
    "identity": "linear",
}


def activation_name(raw):
    key = str(raw).strip().lower()
    if key not in ACTIVATIONS:
        raise ValueError(f"unknown activation '{raw}'")
    return ACTIVATIONS[key]


def read_text_network(path, with_activations, hidden_activation):
    tokens = Path(path).read_text().split()
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"{path}: unexpected end of file")
        pos += 1
        return tokens[pos - 1]

    n_in = int(take())
    n_out = int(take())
    n_hidden = int(take())
    widths = [n_in] + [int(take()) for _ in range(n_hidden)] + [n_out]
    if with_activations:
        acts = [activation_name(take()) for _ in range(n_hidden + 1)]
    else:
        acts = [hidden_activation] * n_hidden + ["linear"]

    layers = []
    for k in range(n_hidden + 1):
        rows, cols = widths[k + 1], widths[k]
        W = np.zeros((rows, cols))
        b = np.zeros(rows)
        for i in range(rows):
            W[i] = [float(take()) for _ in range(cols)]
            b[i] = float(take())
        layers.append({"activation": acts[k], "weights": W, "bias": b})

    offset, scale = 0.0, 1.0
    if pos < len(tokens):
        offset = float(take())
        scale = float(take())
    if pos != len(tokens):
        raise ValueError(f"{path}: {len(tokens) - pos} trailing tokens")
    # the file defines y = (net(x) - offset) * scale
    return layers, -offset * scale, scale


def read_mat_network(path, hidden_activation):
    from scipy.io import loadmat

    data = loadmat(path)
    Ws = [np.atleast_2d(np.asarray(w, dtype=float)) for w in data["W"].ravel()]
    bs = [np.asarray(b, dtype=float).ravel() for b in data["b"].ravel()]
    if "act_fcns" in data:
        acts = [activation_name(str(a).strip()) for a in np.asarray(data["act_fcns"]).ravel()]
    else:
        acts = [hidden_activation] * (len(Ws) - 1) + ["linear"]
    if not (len(Ws) == len(bs) == len(acts)):
        raise ValueError(f"{path}: W, b and act_fcns have different lengths")
    return [{"activation": a, "weights": W, "bias": b} for W, b, a in zip(Ws, bs, acts)], 0.0, 1.0


def fold_input_map(layers, matrix, offset):
    first = layers[0]
    if first["weights"].shape[1] != matrix.shape[0]:
        raise ValueError("input map rows do not match the network input width")
    first["bias"] = first["bias"] + first["weights"] @ offset
    first["weights"] = first["weights"] @ matrix


def fold_output_map(layers, scale, offset):
    if scale == 1.0 and offset == 0.0:
        return
    last = layers[-1]
    if last["activation"] == "linear":
        last["weights"] = scale * last["weights"]
        last["bias"] = scale * last["bias"] + offset
        return
    width = last["weights"].shape[0]
    layers.append({"activation": "linear", "weights": scale * np.eye(width), "bias": np.full(width, offset)})


def to_json(layers):
    for k, L in enumerate(layers):
        if k and L["weights"].shape[1] != layers[k - 1]["weights"].shape[0]:
            raise ValueError(f"layer {k}: width mismatch")
        if not (np.all(np.isfinite(L["weights"])) and np.all(np.isfinite(L["bias"]))):
            raise ValueError(f"layer {k}: non-finite values")
    return {
        "layers": [
            {"activation": L["activation"], "weights": L["weights"].tolist(), "bias": L["bias"].tolist()}
            for L in layers
        ]
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("input")
    ap.add_argument("output")
    ap.add_argument("--format", choices=["polar", "sherlock", "mat"], required=True)
    ap.add_argument("--hidden-activation", default="relu", type=activation_name)
    ap.add_argument("--input-map", type=Path)
    ap.add_argument("--output-offset", type=float, default=0.0)
    ap.add_argument("--output-scale", type=float, default=1.0)
    args = ap.parse_args(argv)

    if args.format == "mat":
        layers, offset, scale = read_mat_network(args.input, args.hidden_activation)
    else:
        layers, offset, scale = read_text_network(args.input, args.format == "polar", args.hidden_activation)

    if args.input_map:
        spec = json.loads(args.input_map.read_text())
        fold_input_map(layers, np.asarray(spec["matrix"], dtype=float), np.asarray(spec["offset"], dtype=float))
    fold_output_map(layers, scale * args.output_scale, offset * args.output_scale + args.output_offset)

    Path(args.output).write_text(json.dumps(to_json(layers)) + "\n")
    shapes = [layers[0]["weights"].shape[1]] + [L["weights"].shape[0] for L in layers]
    print(f"wrote {args.output}: widths {tuple(shapes)}", file=sys.stderr)


if __name__ == "__main__":
    main()
