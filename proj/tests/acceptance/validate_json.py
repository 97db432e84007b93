"""Validate JSON documents against schemas: validate_json.py SCHEMA DOC [SCHEMA DOC ...]"""

import json
import sys

import jsonschema


def main(argv):
    if len(argv) < 2 or len(argv) % 2:
        print("usage: validate_json.py SCHEMA DOC [SCHEMA DOC ...]", file=sys.stderr)
        return 2
    failures = 0
    for schema_path, doc_path in zip(argv[::2], argv[1::2]):
        with open(schema_path, encoding="utf-8") as f:
            schema = json.load(f)
        with open(doc_path, encoding="utf-8") as f:
            doc = json.load(f)
        errors = list(jsonschema.Draft202012Validator(schema).iter_errors(doc))
        for e in errors[:3]:
            print(f"{doc_path}: {'/'.join(map(str, e.path))}: {e.message}", file=sys.stderr)
        failures += bool(errors)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
