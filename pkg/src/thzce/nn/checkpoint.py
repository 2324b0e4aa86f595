"""Model checkpoints.

Binary format (little-endian), magic ``THZM``, version 1:

    "THZM" | u16 version | u32 len + ModelSpec (canonical JSON, UTF-8)
    | u32 tensor count
    | per tensor: u32 len + name, u8 ndim, u64 per dim, f64 data
    | u32 CRC-32 of everything above
"""

from __future__ import annotations

import json

import numpy as np

from .._binio import Writer, open_payload
from ..config import canonical_json
from ..errors import FormatError
from .params import Params
from .specs import ModelSpec

MAGIC = b"THZM"
FORMAT_VERSION = 1


def save_model(path, spec: ModelSpec, params: Params) -> None:
    w = Writer()
    w.raw(MAGIC)
    w.u16(FORMAT_VERSION)
    spec_dict = spec.to_dict()
    spec_dict["dnn_hidden"] = list(spec_dict["dnn_hidden"])
    w.text(canonical_json(spec_dict))
    w.u32(len(params))
    for name, arr in params.items():
        w.text(name)
        w.u8(arr.ndim)
        for dim in arr.shape:
            w.u64(dim)
        w.f64_array(arr.ravel())
    with open(path, "wb") as fh:
        fh.write(w.finish())


def load_model(path) -> tuple[ModelSpec, Params]:
    with open(path, "rb") as fh:
        data = fh.read()
    r = open_payload(data, MAGIC)
    version = r.u16()
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported model version {version} (expected {FORMAT_VERSION})")
    spec = ModelSpec.from_dict(json.loads(r.text()))
    count = r.u32()
    params: Params = {}
    for _ in range(count):
        name = r.text()
        ndim = r.u8()
        shape = tuple(r.u64() for _ in range(ndim))
        size = int(np.prod(shape)) if shape else 1
        params[name] = r.f64_array(size).reshape(shape)
    if not r.at_end():
        raise FormatError("trailing bytes after the declared tensors")
    return spec, params
