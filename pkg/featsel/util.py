import csv
import hashlib
import os

from .errors import ReportError

def ensure_dir(path):
    if not os.path.exists(path):
        try:
            os.makedirs(path)
        except EnvironmentError as e:
            raise ReportError("can't create directory: {}".format(e.strerror), path)
    return path

def write_with(write, path):
    """Calls ``write(path)`` and turns an ``EnvironmentError`` into a ``ReportError``.

    Returns ``path``.
    """
    try:
        write(path)
    except EnvironmentError as e:
        raise ReportError("can't write file: {}".format(e.strerror), path)
    return path

def write_rows(path, rows):
    """Writes ``rows`` as comma separated lines ending in ``\\n``; returns ``path``."""
    def write(path):
        with open(path, 'wt', newline='', encoding='utf-8') as fp:
            writer = csv.writer(fp, lineterminator='\n')
            writer.writerows(rows)
    return write_with(write, path)

def file_digest(path):
    """Returns the SHA-256 hex digest of the file at ``path``."""
    digest = hashlib.sha256()
    try:
        with open(path, 'rb') as fp:
            for chunk in iter(lambda: fp.read(65536), b''):
                digest.update(chunk)
    except EnvironmentError as e:
        raise ReportError("can't read file: {}".format(e.strerror), path)
    return digest.hexdigest()

def format_mce(value):
    # Misclassification errors are reported with 4 decimals everywhere a human reads them.
    return '%.4f' % value

def format_float(value):
    # repr() gives the shortest string that reads back to the same double, which keeps CSV
    # files both exact and byte-stable.
    return repr(float(value))

def parse_grid(token):
    """Parses ``A:B:STEP`` (inclusive bounds) or a comma separated list into a list of ints."""
    token = token.strip()
    if ':' in token:
        parts = token.split(':')
        if len(parts) != 3:
            raise ValueError("grid must be A:B:STEP, got {!r}".format(token))
        start, stop, step = (int(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive, got {!r}".format(token))
        return list(range(start, stop + 1, step))
    return [int(p) for p in token.split(',') if p.strip()]

def parse_index_set(token):
    """``"10"`` means the first 10 indices, ``"3,17,42"`` means exactly those."""
    token = token.strip()
    if ',' in token:
        return sorted({int(p) for p in token.split(',') if p.strip()})
    return list(range(int(token)))
