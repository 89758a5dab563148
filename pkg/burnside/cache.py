"""On-disk cache of subgroup classifications, one JSON file per group spec.

Files are named by the SHA-1 of the literal spec string. A version or spec
mismatch, an unreadable file, or stored orbits or a subconjugacy matrix that
disagree with the group are a miss and the classification is recomputed.
"""
import hashlib
import json
import logging
import os

from .lattice import classification_from_orbits

logger = logging.getLogger(__name__)


class ClassificationCache:
    def __init__(self, directory, format_version=1):
        self.directory = directory
        self.format_version = format_version

    def path_for(self, spec):
        name = hashlib.sha1(spec.encode("utf-8")).hexdigest()
        return os.path.join(self.directory, f"{name}.json")

    def load(self, spec, group):
        path = self.path_for(spec)
        if not os.path.exists(path):
            logger.debug("cache miss for %s", spec)
            return None
        try:
            with open(path) as f:
                doc = json.load(f)
            if doc.get("format_version") != self.format_version:
                raise ValueError("format version mismatch")
            if doc.get("spec") != spec or doc.get("order") != group.order:
                raise ValueError("spec mismatch")
            orbits = [c["orbit"] for c in doc["classes"]]
            cl = classification_from_orbits(group, orbits, doc["subconjugacy"])
        except (OSError, ValueError, KeyError, TypeError, IndexError) as e:
            logger.debug("ignoring cache file %s: %s", path, e)
            return None
        logger.debug("cache hit for %s", spec)
        return cl

    def store(self, spec, classification):
        os.makedirs(self.directory, exist_ok=True)
        doc = {
            "format_version": self.format_version,
            "spec": spec,
            "order": classification.group.order,
            "classes": [
                {"order": c.order, "orbit": [list(o) for o in c.orbit]}
                for c in classification
            ],
            "subconjugacy": classification.subconjugacy.astype(int).tolist(),
        }
        path = self.path_for(spec)
        tmp = path + ".tmp"
        with open(tmp, "w") as f:
            json.dump(doc, f, indent=2)
        os.replace(tmp, path)
        logger.debug("cached classification of %s in %s", spec, path)
