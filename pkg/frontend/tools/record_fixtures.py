"""Record golden /api/recommend responses for the console contract tests.

Runs the service in-process against the packaged corpus and captures the
exact JSON the console will receive. Re-run after any change to the
recommendation payload, then re-run the frontend tests.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from chefmind.service import ServiceConfig, create_app

# A spread of clear names, fuzzy phrasings, and two queries the engine
# cannot process, so the unprocessed rendering path gets fixture coverage.
GOLDEN_QUERIES = [
    "番茄炒蛋怎么做",
    "番茄炖牛腩",
    "酸辣土豆丝",
    "想吃麻婆豆腐",
    "今天想吃点清淡的",
    "随便做点家常菜",
    "天冷了想喝点滋补的汤",
    "家里孩子想喝汤补补",
    "xxxx",
    "佛跳墙的正宗做法教程",
]


def main() -> None:
    app = create_app(ServiceConfig().validated())
    records = []
    with TestClient(app) as client:
        for query in GOLDEN_QUERIES:
            resp = client.post("/api/recommend", json={"query": query, "mode": "full"})
            records.append(
                {
                    "query": query,
                    "mode": "full",
                    "status": resp.status_code,
                    "body": resp.json(),
                }
            )

    out = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "golden.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(records, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    answered = sum(1 for r in records if r["body"]["recipes"])
    print(f"wrote {len(records)} responses ({answered} answered) to {out}")


if __name__ == "__main__":
    main()
