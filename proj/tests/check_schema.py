import json
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
schema = json.load(open(schema_path))
jsonschema.Draft202012Validator.check_schema(schema)

runs = [
    ["build", "--algebra", "A1", "--highest", "3", "--t", "0.5"],
    ["build", "--algebra", "B2", "--highest", "2,1", "--classical", "--layout", "sparse"],
    ["build", "--algebra", "G2", "--highest", "1,0", "--t", "1"],
    ["oracle-build", "--algebra", "A3", "--highest", "1,0,1", "--t", "0.2"],
]
with tempfile.TemporaryDirectory() as tmp:
    for n, args in enumerate(runs):
        path = f"{tmp}/rep{n}.json"
        subprocess.run([cli, *args, "--out", path], check=True, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        jsonschema.validate(json.load(open(path)), schema, cls=jsonschema.Draft202012Validator)
        print("valid:", " ".join(args))
