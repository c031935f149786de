"""Optional live-endpoint smoke test.

Model outputs are nondeterministic, so nothing here gates a release; the
offline replay fixtures are the reproducible path. Set GRAPHQA_LIVE_ENDPOINT
(and optionally GRAPHQA_LIVE_MODEL) to point at a running completion server
to exercise the real HTTP path end to end.
"""

import os

import pytest

from graphqa.llm import Gateway, LiveBackend
from graphqa.pipeline import PipelineConfig, answer_question

requires_live = pytest.mark.skipif(
    not os.environ.get("GRAPHQA_LIVE_ENDPOINT"),
    reason="set GRAPHQA_LIVE_ENDPOINT to run the live smoke test",
)


@requires_live
def test_live_pipeline_smoke(fixture_graph, templates):
    gateway = Gateway(LiveBackend(os.environ["GRAPHQA_LIVE_ENDPOINT"]))
    config = PipelineConfig(
        model_task1=os.environ.get("GRAPHQA_LIVE_MODEL", "llama3.1:8b"),
        templates=templates,
    )
    run = answer_question("How many towers are there?", fixture_graph, gateway, config)
    assert run.failure is None
    assert run.answer
