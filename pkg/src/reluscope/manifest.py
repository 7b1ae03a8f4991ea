"""Run manifests: the resolved configuration and digests of every output.

A manifest records what a command was asked to do, what it produced, and
SHA-256 digests of each artifact, so a rerun with the same configuration can
be checked for byte-identical outputs.  Wall time is informational and is
the one field expected to differ between otherwise identical runs.
"""

import hashlib
import json


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(path, command: str, config: dict, seed, version: str,
                   wall_time_s: float, output_paths, status: str = "ok",
                   metrics: dict = None) -> dict:
    """Write the manifest JSON and return the document that was written."""
    doc = {
        "command": command,
        "config": config,
        "seed": seed,
        "version": version,
        "wall_time_s": wall_time_s,
        "status": status,
        "outputs": {p.name if hasattr(p, "name") else str(p).rsplit("/", 1)[-1]:
                    sha256_file(p) for p in output_paths},
    }
    if metrics is not None:
        doc["metrics"] = metrics
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc


def load_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
