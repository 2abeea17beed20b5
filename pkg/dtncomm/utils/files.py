import hashlib
from pathlib import Path

DIGEST_CHUNK = 1 << 20


def is_file_suffix(filename, suffixes, check_exist=True):
    """
    is_file + check for suffix
    :param filename: pathlike object
    :param suffixes: tuple of possible suffixes
    :param check_exist: whether to check the file's existence
    :return: bool
    """
    if check_exist and not Path(filename).is_file():
        return False
    return str(filename).endswith(suffixes)


def is_csv(filename, check_exist=True):
    return is_file_suffix(filename, (".csv", ".CSV"), check_exist=check_exist)


def is_json(filename, check_exist=True):
    return is_file_suffix(filename, (".json", ".JSON"), check_exist=check_exist)


def sidecar_path(filename, suffix=".json"):
    """The path of a header file stored next to filename, e.g. graph.csv -> graph.json"""
    return Path(filename).with_suffix(suffix)


def file_digest(filename):
    """sha256 hex digest of a file's content"""
    sha = hashlib.sha256()
    with open(filename, "rb") as f:
        for chunk in iter(lambda: f.read(DIGEST_CHUNK), b""):
            sha.update(chunk)
    return sha.hexdigest()
