"""Result and time-series files."""

import csv
import json

import numpy as np

RAW_MAGIC = "RAQR-IQ"
RAW_VERSION = 1


def fmt(x):
    """Shortest round-trip text for a float."""
    return repr(float(x))


def write_rows(path, header, rows, comment=None):
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_curve(path, x, y, stderr=None, x_name="x", y_name="y", comment=None):
    """One curve per file: (x, y, stderr)."""
    s = np.zeros(len(x)) if stderr is None else stderr
    write_rows(path, [x_name, y_name, "stderr"], [(float(a), float(b), float(c)) for a, b, c in zip(x, y, s)],
               comment)


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def write_timeseries(path, t, values):
    """Real series as CSV with columns t_s,value."""
    write_rows(path, ["t_s", "value"], [(float(a), float(b)) for a, b in zip(t, values)])


def read_timeseries(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def write_complex_raw(path, samples, fs):
    """Complex stream: one ASCII header line, then little-endian float64 (re, im) pairs.

    Header: ``RAQR-IQ 1 fs=<Hz> n=<count>\\n``.
    """
    z = np.asarray(samples, dtype=complex).ravel()
    pairs = np.empty(2 * z.size, dtype="<f8")
    pairs[0::2] = z.real
    pairs[1::2] = z.imag
    with open(path, "wb") as fh:
        fh.write(f"{RAW_MAGIC} {RAW_VERSION} fs={float(fs)!r} n={z.size}\n".encode("ascii"))
        fh.write(pairs.tobytes())


def read_complex_raw(path):
    """Returns (samples, fs)."""
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        if len(header) != 4 or header[0] != RAW_MAGIC or int(header[1]) != RAW_VERSION:
            raise ValueError(f"{path}: not a {RAW_MAGIC} v{RAW_VERSION} file")
        fs = float(header[2].split("=", 1)[1])
        n = int(header[3].split("=", 1)[1])
        pairs = np.frombuffer(fh.read(), dtype="<f8")
    if pairs.size != 2 * n:
        raise ValueError(f"{path}: expected {n} samples, found {pairs.size / 2}")
    return pairs[0::2] + 1j * pairs[1::2], fs
