"""Binary checkpoint format.

Layout:  magic b"DMCN" | version u16 LE | spec-JSON length u32 LE |
spec JSON (UTF-8) | concatenated per-layer little-endian float32 payloads.

Payload order follows the spec's layer order; within a layer it is the
layer's ``state_arrays()`` order (parameters, then batch-norm running
statistics).  Parameters live in float32, so load(save(net)) reproduces
every array bit-exactly and every prediction exactly.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from ..errors import BadCheckpoint, IoFailure
from .network import Network, NetworkSpec

MAGIC = b"DMCN"
VERSION = 1


def save_checkpoint(path, net: Network) -> None:
    spec_json = json.dumps(net.spec.to_json(), sort_keys=True).encode("utf-8")
    try:
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<H", VERSION))
            fh.write(struct.pack("<I", len(spec_json)))
            fh.write(spec_json)
            for layer in net.layers:
                for arr in layer.state_arrays():
                    fh.write(arr.astype("<f4", copy=False).tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write checkpoint {path}: {exc}") from exc


def load_checkpoint(path) -> Network:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read checkpoint {path}: {exc}") from exc
    if blob[:4] != MAGIC:
        raise BadCheckpoint(f"{path}: bad magic {blob[:4]!r}")
    (version,) = struct.unpack("<H", blob[4:6])
    if version != VERSION:
        raise BadCheckpoint(f"{path}: unsupported version {version}")
    (spec_len,) = struct.unpack("<I", blob[6:10])
    spec = NetworkSpec.from_json(json.loads(blob[10 : 10 + spec_len].decode("utf-8")))
    net = Network(spec, seed=0)
    pos = 10 + spec_len
    for layer in net.layers:
        arrays = layer.state_arrays()
        loaded = []
        for arr in arrays:
            nbytes = arr.size * 4
            if pos + nbytes > len(blob):
                raise BadCheckpoint(f"{path}: truncated parameter payload")
            loaded.append(
                np.frombuffer(blob[pos : pos + nbytes], dtype="<f4").reshape(arr.shape)
            )
            pos += nbytes
        layer.load_state_arrays(loaded)
    if pos != len(blob):
        raise BadCheckpoint(f"{path}: {len(blob) - pos} trailing bytes")
    return net
