"""JSON documents for matrices, scalars and GaussianOp values.

Complex scalars are ``{"re": x, "im": y}``; a matrix is
``{"d": d, "re": [[...]], "im": [[...]]}`` with ``im`` optional. Floats are
written with ``repr`` precision, so documents round-trip bit for bit.
"""

import json
from dataclasses import dataclass

import numpy as np

from .gaussops import GaussianOp, KernelGaussian


@dataclass
class MatrixDocument:
    d: int
    re: np.ndarray
    im: np.ndarray = None

    def __post_init__(self):
        self.re = np.asarray(self.re, dtype=float)
        self.im = np.zeros_like(self.re) if self.im is None else np.asarray(self.im, dtype=float)
        n = 2 * int(self.d)
        if self.re.shape != (n, n) or self.im.shape != (n, n):
            raise ValueError(f"matrix document with d={self.d} needs {n}×{n} arrays")

    @property
    def matrix(self):
        return self.re + 1j * self.im

    @classmethod
    def from_matrix(cls, M):
        M = np.asarray(M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise ValueError("expected a 2d×2d matrix")
        return cls(M.shape[0] // 2, M.real.copy(), M.imag.copy())

    @classmethod
    def from_dict(cls, doc):
        if "re" not in doc:
            raise ValueError("matrix document needs a 're' field")
        re = np.asarray(doc["re"], dtype=float)
        d = int(doc.get("d", re.shape[0] // 2))
        return cls(d, re, doc.get("im"))

    def to_dict(self):
        return {"d": int(self.d), "re": self.re.tolist(), "im": self.im.tolist()}


def complex_doc(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def parse_complex(v):
    if isinstance(v, dict):
        return complex(v.get("re", 0.0), v.get("im", 0.0))
    if isinstance(v, str):
        parts = [p.strip() for p in v.split(",")]
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
        return complex(v.replace(" ", "").replace("i", "j"))
    return complex(v)


def matrix_doc(M):
    return MatrixDocument.from_matrix(M).to_dict()


def parse_matrix(doc):
    if isinstance(doc, dict) and doc.get("type") == "GaussianOp":
        doc = doc["form"]
    if isinstance(doc, dict):
        return MatrixDocument.from_dict(doc).matrix
    return np.asarray(doc, dtype=complex)


def gaussian_doc(G):
    return {"type": "GaussianOp", "scale": complex_doc(G.scale), "form": matrix_doc(G.form)}


def parse_gaussian(doc):
    """GaussianOp document, or a bare matrix document (scale 1)."""
    if isinstance(doc, dict) and doc.get("type") == "GaussianOp":
        return GaussianOp(parse_complex(doc["scale"]), parse_matrix(doc["form"]))
    return GaussianOp(1.0, parse_matrix(doc))


def kernel_doc(K: KernelGaussian):
    d = K.d
    return {
        "type": "KernelGaussian",
        "prefactor": complex_doc(K.prefactor),
        "quad_xx": _block(K.quad_xx),
        "quad_xy": _block(K.quad_xy),
        "quad_yy": _block(K.quad_yy),
        "d": d,
        "branch_flag": bool(K.branch_flag),
    }


def _block(M):
    return {"re": np.real(M).tolist(), "im": np.imag(M).tolist()}


def to_jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers recursively."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, GaussianOp):
        return gaussian_doc(obj)
    if isinstance(obj, KernelGaussian):
        return kernel_doc(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_doc(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            if obj.ndim == 2 and obj.shape[0] == obj.shape[1] and obj.shape[0] % 2 == 0:
                return matrix_doc(obj)
            return [to_jsonable(v) for v in obj.tolist()]
        return obj.tolist()
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=True)


def load_source(src):
    """Read a JSON document from a path, ``-`` (stdin) or an inline JSON string."""
    import sys

    if src == "-":
        return json.load(sys.stdin)
    s = src.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    with open(src) as fh:
        return json.load(fh)
