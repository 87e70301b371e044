#!/usr/bin/env python3
"""Writes the labelled fixture corpus whose per-group category counts equal
the published inspection table, in canonical corpus CSV form.

Usage: make_group_counts_fixture.py OUT.csv
"""
import csv
import sys

SLUGS = [
    "short-description", "excess", "abstract", "understandability", "undefined",
    "inconsistent", "mistake", "rationale", "short-items", "missed-inspection",
    "presentation", "enhancement-request", "format",
]

# (year, group, comment count, label counts in taxonomy order)
GROUPS = [
    (2022, "G1", 264, [50, 13, 22, 6, 3, 10, 24, 22, 1, 2, 57, 53, 6]),
    (2021, "G1", 117, [3, 2, 8, 6, 0, 8, 22, 18, 2, 0, 21, 33, 0]),
    (2020, "G1", 95, [14, 0, 8, 8, 0, 11, 21, 13, 2, 1, 11, 19, 2]),
    (2020, "G2", 76, [14, 1, 2, 3, 2, 6, 12, 6, 0, 0, 12, 27, 0]),
]

PHRASES = {
    "short-description": ["Lack of description for the {t}.", "Please elaborate on the {t}; not enough detail.",
                          "{t}の説明不足です。"],
    "excess": ["The {t} section is redundant.", "This part of the {t} is unnecessary.", "{t}の記述が冗長です。"],
    "abstract": ["The {t} is too vague.", "Be more specific about the {t}.", "{t}が曖昧です。"],
    "understandability": ["The {t} is hard to understand.", "The flow of the {t} is confusing.",
                          "{t}がわかりにくいです。"],
    "undefined": ["The term used in the {t} is undefined.", "Please define the {t} terms.", "{t}の用語が未定義です。"],
    "inconsistent": ["The {t} is inconsistent with the class diagram.", "The {t} does not match the spec.",
                     "{t}と画面遷移図が不一致です。"],
    "mistake": ["The {t} has a wrong value.", "Incorrect multiplicity in the {t}.", "{t}に誤りがあります。"],
    "rationale": ["What is the rationale for the {t}?", "Explain the reason for the {t}.", "{t}の根拠を書いてください。"],
    "short-items": ["The {t} is missing an item.", "An entry was omitted from the {t}.", "{t}の項目不足です。"],
    "missed-inspection": ["The {t} is still not fixed.", "The previous comment on the {t} is not reflected.",
                          "{t}が未修正です。"],
    "presentation": ["Typo in the {t}.", "Check the spelling in the {t}.", "{t}に誤字があります。"],
    "enhancement-request": ["It would be better to split the {t}.", "Consider adding a diagram to the {t}.",
                            "{t}を改善したほうがよいです。"],
    "format": ["The {t} layout is broken.", "Fix the heading format of the {t}.", "{t}の書式を揃えてください。"],
}

TOPICS = ["login screen", "order table", "use case list", "sequence diagram", "state chart",
          "database spec", "menu screen", "search function", "error message", "user class"]

ARTIFACTS = [
    ("functional-spec", "docs/functional-spec.md"),
    ("screen-transition", "docs/screen-transition.md"),
    ("class-diagram", "docs/class-diagram.pu"),
    ("database-spec", "docs/database-spec.md"),
    ("sequence-diagram", "docs/sequence-diagram.pu"),
    ("statechart", "docs/statechart.pu"),
]

HEADER = ["comment_id", "year", "group", "source", "artifact", "author_role", "created_at", "body",
          "labels", "labeler", "project_id", "frame_id", "x", "y", "repo", "pr_number", "file_path",
          "image_path"]


def label_sets(n_comments, counts):
    occurrences = [i for i, n in enumerate(counts) for _ in range(n)]
    extra = len(occurrences) - n_comments
    assert 0 <= extra <= n_comments
    sets = [[c] for c in occurrences[:n_comments]]
    for j, c in enumerate(occurrences[n_comments:]):
        assert c not in sets[j]
        sets[j].append(c)
    return [sorted(s) for s in sets]


def rows():
    out = []
    for year, group, n, counts in GROUPS:
        sets = label_sets(n, counts)
        repo = f"pbl{year}-{group.lower()}/documents"
        for k, labels in enumerate(sets):
            cid = f"tv{year}{group.lower()}-{k + 1:03d}"
            topic = TOPICS[k % len(TOPICS)]
            parts = [PHRASES[SLUGS[c]][(k + i) % 3].format(t=topic) for i, c in enumerate(labels)]
            artifact, path = ARTIFACTS[k % len(ARTIFACTS)]
            day = 1 + k % 28
            month = 5 + (k // 28) % 7
            created = f"{year}-{month:02d}-{day:02d}T{9 + k % 8:02d}:{(7 * k) % 60:02d}:00Z"
            out.append([
                cid, str(year), group, "code-host", artifact, "teacher", created, " ".join(parts),
                ";".join(SLUGS[c] for c in labels), "human:staff", "", "", "", "", repo,
                str(1 + k // 20), path, "",
            ])
    out.sort(key=lambda r: r[0])
    return out


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    with open(sys.argv[1], "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\r\n")
        w.writerow(HEADER)
        w.writerows(rows())


if __name__ == "__main__":
    main()
