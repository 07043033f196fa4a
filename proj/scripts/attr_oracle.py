#!/usr/bin/env python3
"""Independent reference calculation of the 40 attributes for the golden
fixture texts. Implements the documented extraction rules directly from
their prose description, reading the same data files the library bundles;
output is frozen into tests/data/attr_goldens.json and the library must
match it (counts exactly, formula values to 1e-9).
"""

import json
import os
import re

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "core", "data")

FIXTURES = [
    "The cat sat.",
    "the the the",
    "Hi! Bye!",
    "The French delegation arrived in Paris on the first of May, carrying 200 dollars.",
    "Congress passed the Copyright Act because the old law was weak.",
    "Although it rained heavily, we walked quickly to the market and we bought fresh bread.",
    "The teacher who taught the lesson smiled.",
    "A quixotic zeppelin meandered over the verdant plateau.",
    "She wants to go home because the weather changed.",
    "In New York the United States delegation met 25 Egyptian students on the 3rd of March. "
    "They discussed the famous Privacy Law and spent 50 euros.",
]


def lines(name):
    with open(os.path.join(DATA, name)) as f:
        return [l.rstrip("\n") for l in f if l.strip()]


FREQUENT = set(lines("frequent_words.txt"))
AOA = dict((w, float(a)) for w, a in (l.split("\t") for l in lines("aoa.txt")))
STOP = set(lines("stopwords.txt"))
POS_LEX = dict(l.split("\t") for l in lines("pos_lexicon.txt"))
GPE = set(lines("gazetteer_gpe.txt"))
GPE_MAX = max(len(e.split(" ")) for e in GPE)
NORP = set(lines("gazetteer_norp.txt"))
LAW = set(lines("law_markers.txt"))
MONEY = set(lines("money_units.txt"))
ORDINALS = set(lines("ordinals.txt"))

AOA_DEFAULT = 11.0


def syllables(word):
    letters = "".join(c.lower() for c in word if c.isalpha())
    if not letters:
        return 1
    groups = len(re.findall(r"[aeiouy]+", letters))
    if groups > 1 and letters.endswith("e") and not letters.endswith("le"):
        groups -= 1
    return max(1, groups)


def suffix_tag(low):
    for s in ("tion", "sion", "ment", "ness", "ance", "ence", "ship", "hood", "dom"):
        if low.endswith(s):
            return "NOUN"
    if low.endswith("ity"):
        return "NOUN"
    if low.endswith("ly"):
        return "ADV"
    if len(low) >= 5 and (low.endswith("ing") or low.endswith("ed")):
        return "VERB"
    for s in ("ize", "ise", "ify"):
        if low.endswith(s):
            return "VERB"
    for s in ("ous", "ful", "ive", "able", "ible", "ish", "less", "est"):
        if low.endswith(s):
            return "ADJ"
    if low.endswith("ic") or (len(low) >= 5 and low.endswith("al")):
        return "ADJ"
    return "NOUN"


def digit_ordinal(low):
    return bool(re.fullmatch(r"[0-9]+(st|nd|rd|th)", low))


def tokenize(text):
    """Sentences on runs of .!?; words are alnum/apostrophe runs with edge
    apostrophes stripped; sentences without words are dropped."""
    sentences = []
    current = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isalnum() or c == "'":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "'"):
                j += 1
            word = text[i:j].strip("'")
            if any(ch.isalnum() for ch in word):
                current.append(word)
            i = j
        elif c in ".!?":
            while i < n and text[i] in ".!?":
                i += 1
            if current:
                sentences.append(current)
                current = []
        else:
            i += 1
    if current:
        sentences.append(current)

    tagged = []
    for sent in sentences:
        toks = []
        for k, surface in enumerate(sent):
            low = surface.lower()
            if low.isdigit() or digit_ordinal(low):
                pos = "NUM"
            elif low == "that":
                nxt = POS_LEX.get(sent[k + 1].lower()) if k + 1 < len(sent) else None
                pos = "DET" if nxt in ("NOUN", "ADJ") else "SCONJ"
            elif low == "to":
                nxt = POS_LEX.get(sent[k + 1].lower()) if k + 1 < len(sent) else None
                pos = "PART" if nxt in ("VERB", "AUX") else "ADP"
            elif low in POS_LEX:
                pos = POS_LEX[low]
            elif surface[0].isupper() and k > 0:
                pos = "PROPN"
            else:
                pos = suffix_tag(low)
            toks.append({
                "surface": surface,
                "low": low,
                "pos": pos,
                "chars": sum(1 for ch in surface if ch.isalnum()),
                "syll": syllables(surface),
                "cap": surface[0].isupper(),
            })
        tagged.append(toks)
    return tagged


REL_PRON = {"who", "whom", "whose", "which"}
VERB_RUN = {"AUX", "VERB", "ADV", "PART"}


def clause_counts(sent):
    clauses = dependent = 0
    pending = False
    i = 0
    while i < len(sent):
        t = sent[i]
        if t["pos"] == "SCONJ" or (t["pos"] == "PRON" and t["low"] in REL_PRON):
            pending = True
            i += 1
            continue
        if t["pos"] not in VERB_RUN:
            i += 1
            continue
        j = i
        while j < len(sent) and sent[j]["pos"] in VERB_RUN:
            j += 1
        first_verb = next((k for k in range(i, j) if sent[k]["pos"] in ("AUX", "VERB")), None)
        if first_verb is not None:
            infinitive = (first_verb > i and sent[first_verb - 1]["pos"] == "PART"
                          and sent[first_verb - 1]["low"] == "to")
            if not infinitive:
                clauses += 1
                if pending:
                    dependent += 1
                    pending = False
        i = j
    t_units = max(1, clauses - dependent) if clauses else 0
    complex_t = min(t_units, dependent) if clauses else 0
    return clauses, dependent, t_units, complex_t


def entity_counts(sent):
    norp = gpe = law = money = ordinal = 0
    for i, t in enumerate(sent):
        if t["surface"] in LAW and i > 0 and sent[i - 1]["cap"]:
            law += 1
        if t["low"] in MONEY and i > 0 and sent[i - 1]["pos"] == "NUM":
            money += 1
        if t["low"] in ORDINALS or digit_ordinal(t["low"]):
            ordinal += 1
    i = 0
    while i < len(sent):
        matched = False
        for length in range(min(GPE_MAX, len(sent) - i), 0, -1):
            joined = " ".join(tok["surface"] for tok in sent[i:i + length])
            if joined in GPE:
                gpe += 1
                i += length
                matched = True
                break
        if matched:
            continue
        if sent[i]["surface"] in NORP:
            norp += 1
        i += 1
    return norp, gpe, law, money, ordinal


NOMINALIZERS = ("tion", "sion", "ment", "ness", "ance", "ence", "ship", "hood", "dom", "ity")
LEXICAL = {"NOUN", "PROPN", "VERB", "ADJ", "ADV"}


def extract(text):
    sents = tokenize(text)
    words = [t for s in sents for t in s]
    assert words, "fixture must tokenize to at least one word"

    total = len(words)
    chars = sum(t["chars"] for t in words)
    syll = sum(t["syll"] for t in words)
    nsent = len(sents)

    uniq = {t["low"] for t in words}
    soph_tokens = [t for t in words if t["low"] not in FREQUENT]
    uniq_soph = {t["low"] for t in soph_tokens}
    lexical = [t for t in words if t["pos"] in LEXICAL]
    uniq_lexical = {t["low"] for t in lexical}
    uniq_soph_lexical = {t["low"] for t in lexical if t["low"] not in FREQUENT}
    verbs = [t for t in words if t["pos"] == "VERB"]
    uniq_verbs = {t["low"] for t in verbs}
    uniq_soph_verbs = {t["low"] for t in verbs if t["low"] not in FREQUENT}
    adjs = [t for t in words if t["pos"] == "ADJ"]
    advs = [t for t in words if t["pos"] == "ADV"]

    clauses = dependent = t_units = complex_t = 0
    norp = gpe = law = money = ordinal = 0
    nominals = 0
    for s in sents:
        c, d, tu, ct = clause_counts(s)
        clauses += c
        dependent += d
        t_units += tu
        complex_t += ct
        e = entity_counts(s)
        norp += e[0]
        gpe += e[1]
        law += e[2]
        money += e[3]
        ordinal += e[4]
        for i, t in enumerate(s):
            if t["pos"] == "ADJ" and i + 1 < len(s) and s[i + 1]["pos"] in ("NOUN", "PROPN"):
                nominals += 1
            if t["pos"] == "NOUN" and any(t["low"].endswith(sfx) for sfx in NOMINALIZERS):
                nominals += 1

    def ratio(a, b):
        return a / b if b else 0.0

    return [
        len(uniq_soph),
        len(uniq_lexical),
        len(uniq_soph_lexical),
        total,
        len(soph_tokens),
        ratio(len(uniq_soph_lexical), len(uniq_lexical)),
        ratio(len(uniq_soph_verbs), len(verbs)),
        ratio(len(uniq), total),
        ratio(len(uniq_verbs), len(verbs)),
        ratio(len({t["low"] for t in adjs}), len(adjs)),
        ratio(len({t["low"] for t in advs}), len(advs)),
        dependent,
        clauses,
        t_units,
        complex_t,
        nominals,
        sum(1 for t in words if t["low"] in STOP),
        nsent,
        chars,
        ratio(total, nsent),
        ratio(chars, nsent),
        ratio(chars, total),
        ratio(syll, nsent),
        sum(AOA.get(t["low"], AOA_DEFAULT) for t in words),
        norp,
        gpe,
        law,
        money,
        ordinal,
        sum(1 for t in words if t["pos"] == "CCONJ"),
        sum(1 for t in words if t["pos"] == "NOUN"),
        sum(1 for t in words if t["pos"] == "NUM"),
        sum(1 for t in words if t["pos"] == "PROPN"),
        sum(1 for t in words if t["pos"] == "SCONJ"),
        4.71 * ratio(chars, total) + 0.5 * ratio(total, nsent) - 21.43,
        total * 60.0 / 240.0,
        len(verbs),
        len(adjs),
        len(advs),
        len(uniq),
    ]


def main():
    out = [{"text": t, "values": extract(t)} for t in FIXTURES]
    dest = os.path.join(ROOT, "tests", "data", "attr_goldens.json")
    os.makedirs(os.path.dirname(dest), exist_ok=True)
    with open(dest, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")
    for entry in out:
        print(entry["text"][:50])
        print("  ", [round(v, 4) if isinstance(v, float) else v for v in entry["values"]])


if __name__ == "__main__":
    main()
