import csv
import hashlib
import json
import zipfile
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

import numpy as np


def array_digest(named_arrays: Iterable[Tuple[str, np.ndarray]]) -> str:
    """sha256 over (name, dtype, shape, bytes) of every array, in the given order."""
    digest = hashlib.sha256()
    for name, array in named_arrays:
        array = np.ascontiguousarray(array)
        digest.update(name.encode("utf-8"))
        digest.update(str(array.dtype).encode("ascii"))
        digest.update(repr(array.shape).encode("ascii"))
        digest.update(array.tobytes())
    return digest.hexdigest()


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as output_file:
        json.dump(payload, output_file, indent=2, sort_keys=True)
        output_file.write("\n")
    return path


def read_json(path):
    with open(path, "r") as input_file:
        return json.load(input_file)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as output_file:
        writer = csv.writer(output_file, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(value) for value in row])
    return path


def read_csv(path) -> Tuple[List[str], List[List[str]]]:
    with open(path, "r", newline="") as input_file:
        reader = csv.reader(input_file)
        rows = [row for row in reader if row]
    if not rows:
        return [], []
    return rows[0], rows[1:]


def format_cell(value):
    # repr keeps every bit of a float so files re-read identically
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


# fixed entry timestamp so identical arrays give identical archives
NPZ_DATE_TIME = (1980, 1, 1, 0, 0, 0)


def save_npz(path, arrays: Sequence[Tuple[str, np.ndarray]]) -> Path:
    """``np.savez`` equivalent whose bytes depend only on the arrays."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(path, mode="w", compression=zipfile.ZIP_STORED) as archive:
        for name, array in arrays:
            info = zipfile.ZipInfo(name + ".npy", date_time=NPZ_DATE_TIME)
            with archive.open(info, mode="w", force_zip64=True) as entry:
                np.lib.format.write_array(entry, np.asanyarray(array), allow_pickle=False)
    return path
