# Copyright (c) 2026, The oblearn developers. All rights reserved.
# See LICENSE.txt for complete terms.
"""
Readers and writers for oblearn artifacts.

Datasets, mined sets, loss histories and comparison reports are CSV files
with a header row. Metadata that does not fit the columns (the domain box,
the scheme, the effective configuration) is carried in leading comment
lines of the form ``# key: <json>``. Models are versioned JSON documents.
"""
import csv
import json
import logging

import numpy as np

from .benchfn import Dataset, DomainBox
from .datautils import format_decimal
from .exceptions import (FormatError, UnknownVersionError,
                         UnsupportedVersionError, UsageError)
from .opposition import MinedSet, output_stats

LOG = logging.getLogger(__name__)

COMMENT = "#"

MODEL_FORMAT_VERSION = 1


def _write_meta(f, meta):
    for key, value in meta.items():
        f.write("{0} {1}: {2}\n".format(COMMENT, key, json.dumps(value, sort_keys=True)))


def _read_meta(line, lineno):
    body = line[len(COMMENT):].strip()
    key, sep, value = body.partition(":")
    if not sep:
        return None, None
    try:
        return key.strip(), json.loads(value)
    except ValueError as ex:
        raise FormatError("bad metadata '%s': %s" % (key.strip(), ex),
                          field=key.strip(), line=lineno) from ex


def _read_table(path):
    """Read a CSV artifact.

    Returns:
        A tuple ``(meta, header, rows)`` where `rows` is a list of
        ``(line number, cells)``.
    """
    meta = {}
    header = None
    rows = []

    with open(path, newline="", encoding="utf-8") as f:
        lines = list(f)

    body_start = 0
    for lineno, line in enumerate(lines, 1):
        if not line.startswith(COMMENT):
            body_start = lineno - 1
            break
        key, value = _read_meta(line, lineno)
        if key:
            meta[key] = value
    else:
        body_start = len(lines)

    reader = csv.reader(lines[body_start:])
    for cells in reader:
        lineno = body_start + reader.line_num
        if not cells:
            continue
        if header is None:
            header = [c.strip() for c in cells]
            header_line = lineno
            continue
        if len(cells) != len(header):
            raise FormatError(
                "expected {0} fields, found {1}".format(len(header), len(cells)),
                line=lineno,
            )
        rows.append((lineno, cells))

    if header is None:
        raise FormatError("missing header row", line=body_start + 1)
    meta["_header_line"] = header_line
    return meta, header, rows


def _column(rows, index, name, parse=float):
    values = []
    for lineno, cells in rows:
        try:
            values.append(parse(cells[index]))
        except ValueError as ex:
            raise FormatError(
                "bad value {0!r} in column '{1}'".format(cells[index], name),
                field=name, line=lineno,
            ) from ex
    return values


def _flag(value):
    value = value.strip()
    if value in ("0", "1"):
        return value == "1"
    raise ValueError(value)


def _input_columns(header, prefix, meta):
    names = []
    for name in header:
        if name == "%s%d" % (prefix, len(names) + 1):
            names.append(name)
        elif names:
            break
    if not names:
        raise FormatError("expected columns %s1, %s2, ..." % (prefix, prefix),
                          field=prefix + "1", line=meta["_header_line"])
    return names


def _box_from_meta(meta, arity):
    if "box" not in meta:
        return None
    try:
        box = DomainBox.from_dict(meta["box"])
    except (KeyError, TypeError, ValueError) as ex:
        raise FormatError("bad box metadata: %s" % ex, field="box") from ex
    if box.arity != arity:
        raise FormatError("box arity %d does not match %d input columns"
                          % (box.arity, arity), field="box")
    return box


def _row(values):
    return [format_decimal(v) for v in values]


def write_dataset(data, path, meta=None):
    """Write a Dataset as ``x1[,x2,...],y`` rows."""
    names = ["x%d" % (k + 1) for k in range(data.arity)]
    with open(path, "w", newline="", encoding="utf-8") as f:
        _write_meta(f, dict(meta or {}, box=data.box.to_dict()))
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(names + ["y"])
        for x, y in zip(data.xs, data.ys):
            writer.writerow(_row(list(x) + [y]))
    LOG.debug("Wrote %d samples to %s", len(data), path)


def read_dataset(path):
    """Read a Dataset CSV.

    Raises:
        FormatError: With the line number of the first malformed row.
        UsageError: If the file holds fewer than two samples.
    """
    meta, header, rows = _read_table(path)
    names = _input_columns(header, "x", meta)
    if header[len(names):] != ["y"]:
        raise FormatError("expected columns %s,y" % ",".join(names),
                          field="y", line=meta["_header_line"])
    if not rows:
        raise UsageError("Dataset file %s holds no samples" % path)

    xs = np.column_stack([_column(rows, k, name) for k, name in enumerate(names)])
    ys = _column(rows, len(names), "y")
    return Dataset(xs, ys, box=_box_from_meta(meta, len(names)))


MINED_TAIL = ["y", "target_y", "achieved_y", "fallback"]


def write_mined(mined, path, meta=None):
    """Write a MinedSet as
    ``x1[,...],ox1[,...],y,target_y,achieved_y,fallback`` rows.
    """
    d = mined.arity
    names = (["x%d" % (k + 1) for k in range(d)] +
             ["ox%d" % (k + 1) for k in range(d)] + MINED_TAIL)
    extra = {"scheme": mined.scheme, "box": mined.box.to_dict()}

    with open(path, "w", newline="", encoding="utf-8") as f:
        _write_meta(f, dict(meta or {}, **extra))
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(names)
        for i in range(len(mined)):
            values = (list(mined.inputs[i]) + list(mined.opposites[i]) +
                      [mined.ys[i], mined.targets[i], mined.achieved[i]])
            writer.writerow(_row(values) + [str(int(mined.fallback[i]))])
    LOG.debug("Wrote %d mined pairs to %s", len(mined), path)


def read_mined(path):
    """Read a MinedSet CSV written by :func:`write_mined`."""
    meta, header, rows = _read_table(path)
    names = _input_columns(header, "x", meta)
    d = len(names)
    expected = names + ["ox%d" % (k + 1) for k in range(d)] + MINED_TAIL
    if header != expected:
        raise FormatError("expected columns %s" % ",".join(expected),
                          line=meta["_header_line"])
    if not rows:
        raise UsageError("Mined set file %s holds no pairs" % path)
    if "scheme" not in meta:
        raise FormatError("missing scheme metadata", field="scheme")

    cols = [_column(rows, k, name) for k, name in enumerate(expected[:-1])]
    fallback = _column(rows, len(expected) - 1, "fallback", parse=_flag)
    ys = cols[2 * d]

    return MinedSet(
        inputs=np.column_stack(cols[:d]),
        opposites=np.column_stack(cols[d:2 * d]),
        ys=ys,
        targets=cols[2 * d + 1],
        achieved=cols[2 * d + 2],
        scheme=meta["scheme"],
        stats=output_stats(ys),
        fallback=fallback,
        box=_box_from_meta(meta, d),
    )


def write_history(history, path):
    """Write a LossHistory as ``epoch,train_mse,val_mse`` rows."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "train_mse", "val_mse"])
        for epoch, train_mse, val_mse in history.rows():
            writer.writerow([str(epoch)] + _row([train_mse, val_mse]))


def read_history(path):
    """Read a loss history CSV into ``(epochs, train_mse, val_mse)`` lists."""
    meta, header, rows = _read_table(path)
    if header != ["epoch", "train_mse", "val_mse"]:
        raise FormatError("expected columns epoch,train_mse,val_mse",
                          line=meta["_header_line"])
    return (_column(rows, 0, "epoch", parse=int),
            _column(rows, 1, "train_mse"),
            _column(rows, 2, "val_mse"))


def write_rows(path, header, rows, meta=None):
    """Write a report table of preformatted string cells."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        _write_meta(f, meta or {})
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_json(path, doc):
    """Write a JSON report with stable key order."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


class ModelParser(object):
    """Loads model documents and checks their format version."""

    def supported_versions(self):
        return (MODEL_FORMAT_VERSION,)

    def get_version(self, doc):
        return doc.get("version")

    def _get_version(self, doc):
        """Return the version of `doc`.

        Raises:
            UnknownVersionError
        """
        version = self.get_version(doc)
        if version is not None:
            return version

        raise UnknownVersionError(
            "Unable to determine the version of the model document. No "
            "version field found.", field="version"
        )

    def _check_version(self, doc):
        """Ensure `doc` is a supported version.

        Raises:
            UnsupportedVersionError
        """
        version = self._get_version(doc)
        supported = list(self.supported_versions())

        if version in supported and not isinstance(version, bool):
            return

        error = "Document version ({0!r}) not in supported versions ({1})"
        raise UnsupportedVersionError(
            message=error.format(version, supported),
            expected=supported,
            found=version,
        )

    def parse(self, path, check_version=True):
        """Read the JSON model document at `path`.

        Args:
            path: A filename or a file-like object.
            check_version: Inspect the version before returning.

        Returns:
            The document as a ``dict``.

        Raises:
            FormatError: If the file is not a JSON object.
            UnknownVersionError: If `check_version` is ``True`` and the
                document has no version.
            UnsupportedVersionError: If `check_version` is ``True`` and the
                version is not supported.
        """
        try:
            if hasattr(path, "read"):
                doc = json.load(path)
            else:
                with open(path) as f:
                    doc = json.load(f)
        except ValueError as ex:
            raise FormatError("model file is not valid JSON: %s" % ex) from ex

        if not isinstance(doc, dict):
            raise FormatError("model document must be a JSON object")

        if check_version:
            self._check_version(doc)
        return doc
