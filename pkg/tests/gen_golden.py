"""Regenerate the frozen transcripts under tests/golden/.

Run from the repository root after any intentional protocol change:

    python3 tests/gen_golden.py

Review the diff before committing: every change here is a visible protocol
change, not noise, because transcripts are normalized.
"""
import json
import pathlib

from s3cdm.harness import Topology, TopologyConfig
from s3cdm.scenario import load_script, normalize_transcript, run_script

ROOT = pathlib.Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

SCRIPTS = {
    "case1": "case1_no_restrictions.json",
    "case2": "case2_level1.json",
    "case3": "case3_level2.json",
    "compromise_participant": "compromise_participant.json",
    "compromise_main": "compromise_main.json",
    "broken_path": "broken_path.json",
}


def main():
    GOLDEN.mkdir(exist_ok=True)
    for name, script_file in SCRIPTS.items():
        script = load_script(str(ROOT / "demos" / script_file))
        topology = Topology(TopologyConfig(controllers=6, nodes=6, seed=7)).boot()
        transcript = run_script(topology, script)
        if not transcript["passed"]:
            raise SystemExit(f"{name}: scenario failed, refusing to freeze\n"
                             + json.dumps(transcript["steps"], indent=2))
        out = GOLDEN / f"{name}.json"
        out.write_text(json.dumps(normalize_transcript(transcript), indent=2) + "\n")
        print(f"wrote {out.relative_to(ROOT)} ({len(transcript['events'])} events)")


if __name__ == "__main__":
    main()
