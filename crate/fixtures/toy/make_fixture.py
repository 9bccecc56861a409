#!/usr/bin/env python3
"""Regenerates the toy topic fixture (documents + annotation files).

The topic is six short documents about tribal casinos. Sentences are written
pre-tokenized (tokens separated by spaces; a token glued to the previous one
is prefixed with '~'). POS tags come from a tiny lexicon, NER tags from the
NER table below. Annotations are written by hand and reference tokens by
(doc, sentence, first token, last token).

Run from this directory: python3 make_fixture.py
"""

import json

DOCS = {
    "D01": [
        "Tribes signed new treaties with the state ~.",
        "Gambling is not allowed in Nebraska ~.",
        "Clinton visited the reservation ~.",
        "He said revenue rose sharply ~.",
        "Unemployment remains high on the reservation ~.",
        "Nebraska does not allow casino gambling ~.",
    ],
    "D02": [
        "The casino opened despite gambling laws ~.",
        "Several treaties were signed last year ~.",
        "President Clinton praised the tribes ~.",
        "It closed after the crash ~.",
        "Unemployment fell after the casino opened ~.",
        "Washington promised more funding ~, AP reported ~.",
        "Nebraska bans casino gambling ~.",
    ],
    "D03": [
        "The agreements protect tribal land ~.",
        "Nebraska sued the tribe ~.",
        "The state said gambling hurts families ~.",
        "Revenue rose again ~.",
        "Poverty feeds more poverty ~.",
        "Joblessness in New York worries officials ~.",
    ],
    "D04": [
        "Clinton met tribal leaders ~.",
        "The treaties remain disputed ~.",
        "The casino expanded ~.",
        "The plane crashed near the border ~.",
        "A lawsuit was filed in Cayuga ~.",
        "AP said the tribe disagreed ~.",
    ],
    "D05": [
        "The deals were renegotiated ~.",
        "The FBI investigated the operators ~.",
        "The bureau found growth in fraud ~.",
        "Illegal gambling spread ~.",
        "The crash killed two people ~.",
        "Unemployment doubled in Washington ~.",
        "Tribes want gambling in Nebraska ~.",
    ],
    "D06": [
        "Betting is popular among the Navajo ~.",
        "The FBI arrested two men ~.",
        "The treaties were upheld ~.",
        "An increase in visitors reached New York ~.",
        "Investigators studied the crash ~.",
        "Unemployment is a concern ~.",
        "He left early ~.",
        "He returned later ~.",
    ],
}

POS = {
    "the": "DET", "a": "DET", "an": "DET", "several": "ADJ", "more": "ADJ",
    "new": "ADJ", "high": "ADJ", "tribal": "ADJ", "illegal": "ADJ",
    "popular": "ADJ", "last": "ADJ", "two": "NUM",
    "with": "ADP", "in": "ADP", "on": "ADP", "after": "ADP", "despite": "ADP",
    "near": "ADP", "among": "ADP",
    "he": "PRON", "it": "PRON",
    "not": "PART", "sharply": "ADV", "again": "ADV", "early": "ADV",
    "later": "ADV",
    "is": "AUX", "was": "AUX", "were": "AUX", "does": "AUX",
    ".": "PUNCT", ",": "PUNCT",
    "signed": "VERB", "allowed": "VERB", "visited": "VERB", "said": "VERB",
    "rose": "VERB", "remains": "VERB", "allow": "VERB", "opened": "VERB",
    "praised": "VERB", "closed": "VERB", "fell": "VERB", "promised": "VERB",
    "reported": "VERB", "bans": "VERB", "protect": "VERB", "sued": "VERB",
    "hurts": "VERB", "feeds": "VERB", "worries": "VERB", "met": "VERB",
    "remain": "VERB", "expanded": "VERB", "crashed": "VERB", "filed": "VERB",
    "disagreed": "VERB", "renegotiated": "VERB", "investigated": "VERB",
    "found": "VERB", "spread": "VERB", "killed": "VERB", "doubled": "VERB",
    "want": "VERB", "arrested": "VERB", "upheld": "VERB", "reached": "VERB",
    "studied": "VERB", "left": "VERB", "returned": "VERB",
    "disputed": "ADJ",
    "clinton": "PROPN", "nebraska": "PROPN", "president": "PROPN",
    "washington": "PROPN", "ap": "PROPN", "new": "ADJ", "york": "PROPN",
    "cayuga": "PROPN", "fbi": "PROPN", "navajo": "PROPN",
}

# (doc, sentence, token) -> NER tag; everything else is NONE.
NER = {
    ("D01", 1, 5): "LOCATION",
    ("D01", 2, 0): "PERSON",
    ("D01", 5, 0): "LOCATION",
    ("D02", 2, 0): "PERSON",
    ("D02", 2, 1): "PERSON",
    ("D02", 5, 0): "PERSON",
    ("D02", 5, 5): "ORGANIZATION",
    ("D02", 6, 0): "LOCATION",
    ("D03", 1, 0): "LOCATION",
    ("D03", 5, 2): "LOCATION",  # "New York" with a mixed tag on "York"
    ("D04", 0, 0): "PERSON",
    ("D04", 4, 5): "LOCATION",
    ("D04", 5, 0): "ORGANIZATION",
    ("D05", 1, 1): "ORGANIZATION",
    ("D05", 5, 3): "LOCATION",
    ("D05", 6, 4): "LOCATION",
    ("D06", 0, 5): "ORGANIZATION",
    ("D06", 1, 1): "ORGANIZATION",
    ("D06", 3, 5): "LOCATION",
    ("D06", 3, 6): "LOCATION",
}

# Overrides for tokens whose POS differs from the lexicon.
POS_OVERRIDE = {
    ("D03", 5, 2): "PROPN",
    ("D06", 3, 5): "PROPN",
}


def tokenize(doc_id, sent_index, line):
    raw = line.split(" ")
    tokens = []
    for i, piece in enumerate(raw):
        glued = piece.startswith("~")
        text = piece[1:] if glued else piece
        if glued and tokens:
            tokens[-1]["ws"] = False
        key = (doc_id, sent_index, len(tokens))
        pos = POS_OVERRIDE.get(key) or POS.get(text.lower(), "NOUN")
        tokens.append({"text": text, "ws": True, "pos": pos, "ner": NER.get(key, "NONE")})
    tokens[-1]["ws"] = False
    text = "".join(t["text"] + (" " if t["ws"] else "") for t in tokens)
    return {"text": text, "tokens": tokens}


SENTENCES = {
    doc: [tokenize(doc, i, line) for i, line in enumerate(lines)]
    for doc, lines in DOCS.items()
}


def mention(mid, doc, sent, start, end=None):
    end = start if end is None else end
    toks = SENTENCES[doc][sent]["tokens"]
    surface = ""
    for k in range(start, end + 1):
        surface += toks[k]["text"]
        if k < end and toks[k]["ws"]:
            surface += " "
    return {
        "mention_id": mid,
        "doc_id": doc,
        "sent_index": sent,
        "token_start": start,
        "token_end": end,
        "surface": surface,
    }


EVENT_CLUSTERS = [
    ("ev-treaties-a", [
        mention("v_d01_treaties", "D01", 0, 3),
        mention("v_d02_treaties", "D02", 1, 1),
        mention("v_d03_agreements", "D03", 0, 1),
    ]),
    ("ev-gambling", [
        mention("v_d01_gambling", "D01", 1, 0),
        mention("v_d02_gambling", "D02", 0, 4),
        mention("v_d03_gambling", "D03", 2, 3),
        mention("v_d05_gambling", "D05", 3, 1),
        mention("v_d06_betting", "D06", 0, 0),
    ]),
    ("ev-said", [
        mention("v_d01_said", "D01", 3, 1),
        mention("v_d03_said", "D03", 2, 2),
        mention("v_d04_said", "D04", 5, 1),
    ]),
    ("ev-unemployment-a", [
        mention("v_d01_unemployment", "D01", 4, 0),
        mention("v_d02_unemployment", "D02", 4, 0),
        mention("v_d03_joblessness", "D03", 5, 0),
    ]),
    ("ev-crash-a", [
        mention("v_d02_crash", "D02", 3, 4),
        mention("v_d04_crashed", "D04", 3, 2),
    ]),
    ("ev-rose", [
        mention("v_d01_rose", "D01", 3, 3),
        mention("v_d03_rose", "D03", 3, 1),
        mention("v_d05_growth", "D05", 2, 3),
        mention("v_d06_increase", "D06", 3, 1),
    ]),
    ("ev-treaties-b", [
        mention("v_d04_treaties", "D04", 1, 1),
        mention("v_d05_deals", "D05", 0, 1),
        mention("v_d06_treaties", "D06", 2, 1),
    ]),
    ("ev-ap", [
        mention("v_d02_ap", "D02", 5, 5),
        mention("v_d04_ap", "D04", 5, 0),
    ]),
    ("ev-poverty", [
        mention("v_d03_poverty1", "D03", 4, 0),
        mention("v_d03_poverty2", "D03", 4, 3),
    ]),
    ("ev-crash-b", [
        mention("v_d05_crash", "D05", 4, 1),
        mention("v_d06_crash", "D06", 4, 3),
    ]),
    ("ev-unemployment-b", [
        mention("v_d05_unemployment", "D05", 5, 0),
        mention("v_d06_unemployment", "D06", 5, 0),
    ]),
    ("ev-lawsuit", [
        mention("v_d04_lawsuit", "D04", 4, 1),
    ]),
]

WD_CLUSTERS = [
    ("wd-d01-clinton", [
        mention("m_d01_clinton", "D01", 2, 0),
        mention("m_d01_he", "D01", 3, 0),
    ]),
    ("wd-d01-nebraska", [mention("m_d01_nebraska", "D01", 1, 5)]),
    ("wd-d02-clinton", [mention("m_d02_pclinton", "D02", 2, 0, 1)]),
    ("wd-d02-casino", [
        mention("m_d02_casino", "D02", 0, 0, 1),
        mention("m_d02_it", "D02", 3, 0),
    ]),
    ("wd-d02-washington", [mention("m_d02_washington", "D02", 5, 0)]),
    ("wd-d03-nebraska", [
        mention("m_d03_nebraska", "D03", 1, 0),
        mention("m_d03_state", "D03", 2, 0, 1),
    ]),
    ("wd-d03-newyork", [mention("m_d03_newyork", "D03", 5, 2, 3)]),
    ("wd-d04-clinton", [mention("m_d04_clinton", "D04", 0, 0)]),
    ("wd-d04-casino", [mention("m_d04_casino", "D04", 2, 0, 1)]),
    ("wd-d04-cayuga", [mention("m_d04_cayuga", "D04", 4, 5)]),
    ("wd-d05-fbi", [
        mention("m_d05_fbi", "D05", 1, 1),
        mention("m_d05_bureau", "D05", 2, 0, 1),
    ]),
    ("wd-d05-washington", [mention("m_d05_washington", "D05", 5, 3)]),
    ("wd-d06-fbi", [mention("m_d06_fbi", "D06", 1, 1)]),
    ("wd-d06-newyork", [mention("m_d06_newyork", "D06", 3, 5, 6)]),
    ("wd-d06-he", [
        mention("m_d06_he1", "D06", 6, 0),
        mention("m_d06_he2", "D06", 7, 0),
    ]),
    ("wd-d06-navajo", [mention("m_d06_navajo", "D06", 0, 5)]),
]

CD_SCORES = [
    ("m_d01_clinton", "m_d02_pclinton", 0.9),
    ("m_d01_he", "m_d02_pclinton", 0.2),
    ("m_d01_clinton", "m_d04_clinton", 0.8),
    ("m_d01_he", "m_d04_clinton", 0.4),
    ("m_d02_pclinton", "m_d04_clinton", 0.9),
    ("m_d01_nebraska", "m_d03_nebraska", 0.95),
    ("m_d01_nebraska", "m_d03_state", 0.3),
    ("m_d02_casino", "m_d04_casino", 0.7),
    ("m_d02_it", "m_d04_casino", 0.35),
    ("m_d03_newyork", "m_d06_newyork", 0.6),
    ("m_d05_fbi", "m_d06_fbi", 0.9),
    ("m_d05_bureau", "m_d06_fbi", 0.6),
    ("m_d02_washington", "m_d05_washington", 0.8),
    ("m_d01_nebraska", "m_d06_newyork", 0.1),
    ("m_d04_cayuga", "m_d06_navajo", 0.45),
]

PROPOSITIONS = [
    mention("p1", "D01", 5, 0, 5),
    mention("p2", "D02", 6, 0, 3),
    mention("p3", "D05", 6, 0, 4),
    mention("p4", "D01", 0, 0, 6),
    mention("p5", "D02", 1, 0, 5),
    mention("p6", "D06", 2, 0, 3),
    mention("p7", "D02", 0, 0, 5),
    mention("p8", "D04", 2, 0, 2),
]

ALIGNMENTS = [
    ("p1", "p2", 0.9),
    ("p1", "p3", 0.7),
    ("p4", "p5", 0.5),
    ("p5", "p6", 0.3),
    ("p7", "p8", 0.8),
    ("p3", "p8", 0.2),
]


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    write_jsonl("documents.jsonl", [
        {"doc_id": doc, "title": f"Toy document {doc}", "sentences": sents}
        for doc, sents in SENTENCES.items()
    ])
    write_jsonl("event_clusters.jsonl", [
        {"cluster_id": cid, "mentions": ms} for cid, ms in EVENT_CLUSTERS
    ])
    write_jsonl("entity_wd_clusters.jsonl", [
        {"cluster_id": cid, "mentions": ms} for cid, ms in WD_CLUSTERS
    ])
    write_jsonl("entity_cd_scores.jsonl", [
        {"mention_a": a, "mention_b": b, "score": s} for a, b, s in CD_SCORES
    ])
    write_jsonl("propositions.jsonl", PROPOSITIONS)
    write_jsonl("proposition_alignments.jsonl", [
        {"mention_a": a, "mention_b": b, "score": s} for a, b, s in ALIGNMENTS
    ])
    with open("topic.json", "w", encoding="utf-8") as f:
        json.dump({"display_name": "Tribal casinos (toy topic)"}, f)
        f.write("\n")


if __name__ == "__main__":
    main()
