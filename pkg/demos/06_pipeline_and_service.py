"""Composing everything: pipelines, plan files, and the HTTP service.

Every capability is a registered stage with self-describing parameters;
the same stages run through `run_pipeline`, the `qplumb` CLI, or
POST /v1/pipeline -- with byte-identical outputs.
"""
import json
import threading
import urllib.request

from qplumb import PipelineStage, run_pipeline
from qplumb.pipeline import REGISTRY, parse_plan
from qplumb.service import make_server

# The estimation workflow as a pure function over lists of strings.
stages = [
    PipelineStage("generate.adder", {"n": "4"}),
    PipelineStage("icm", {}),
    PipelineStage("schedule.asap", {}),
    PipelineStage("analyze.availability", {"duration": "5"}),
    PipelineStage("layout.estimate", {}),
]
estimate = json.loads(run_pipeline(stages, [])[0])
print("adder n=4 estimate:", estimate)

# The same workflow as a plan file (what `qplumb pipeline --file` reads).
plan = """
generate.adder n=4
icm
schedule.asap
analyze.availability duration=5
layout.estimate
"""
assert run_pipeline(parse_plan(plan), []) == run_pipeline(stages, [])
print("plan file output matches the in-process run")

# Stage schemas drive auto-generated forms in the web UI.
print("\nregistered stages:")
for name in sorted(REGISTRY):
    spec = REGISTRY[name]
    params = ", ".join(f"{p.name}={p.default}" for p in spec.params)
    print(f"  [{spec.kind:<14}] {name}({params})")

# The HTTP service is the same registry behind loopback HTTP.
server = make_server("127.0.0.1", 0)
threading.Thread(target=server.serve_forever, daemon=True).start()
host, port = server.server_address[:2]
request = urllib.request.Request(
    f"http://{host}:{port}/v1/pipeline",
    data=json.dumps({"stages": [s.__dict__ for s in stages], "input": []}).encode(),
    headers={"Content-Type": "application/json"},
)
with urllib.request.urlopen(request) as resp:
    via_http = json.loads(resp.read())["output"]
print("\nHTTP output equals in-process output:", json.loads(via_http[0]) == estimate)
server.shutdown()
