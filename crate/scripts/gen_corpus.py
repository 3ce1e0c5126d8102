"""Generates the tagged training and held-out corpora of the English fragment.

Sentences come from a small agreement-aware generator over the fragment
vocabulary, so every generated sentence is grammatical in the bundled
grammar. Output: one sentence per line, `word_TAG` tokens.

    python3 gen_corpus.py OUT_DIR [--seed 7] [--train 500] [--heldout 50]
"""

import argparse
import os
import random

from english_vocab import NOUNS, VERBS

INTRANS = ["sleep", "walk", "go", "run", "arrive", "smile", "look", "wait", "think", "read", "write", "draw"]
TRANS = ["see", "have", "find", "buy", "read", "write", "draw", "like", "open", "carry", "visit", "paint",
         "sell", "build", "map", "know", "give", "show", "store"]
DITRANS = ["give", "show"]
PARTICLE = [("map", "out"), ("pick", "up")]
PREP_VERB = [("look", "at"), ("wait", "for")]
SENTENTIAL = ["think", "know", "say"]
ADJ = ["old", "new", "blue", "big", "small", "red", "green", "tall", "young", "long", "good", "happy",
       "black", "white", "little", "fat"]
ADJ_MOD = ["dark", "light"]
COLOR = ["blue", "red", "green"]
PREP = ["in", "on", "with", "near", "from", "under", "by", "about", "to", "at", "for"]
VERB_FORMS = {v[0]: v for v in VERBS}
NOUN_FORMS = dict(NOUNS)
SG_DET = ["a", "the", "this", "every", "my", "his", "their", "our", "your", "some"]
PL_DET = ["the", "these", "those", "some", "my", "his", "their", "our", "your"]
SUBJ_PRON = [("I", "non3sg"), ("you", "non3sg"), ("he", "3sg"), ("she", "3sg"), ("it", "3sg"),
             ("we", "non3sg"), ("they", "non3sg")]
OBJ_PRON = ["me", "you", "him", "her", "it", "us", "them"]
PROPER = ["John", "Mary", "Paris", "London", "Pat", "Kim"]
COMMON = [n for n, _ in NOUNS if n not in ("saw",)]


class Gen:
    def __init__(self, rng):
        self.r = rng

    def chance(self, p):
        return self.r.random() < p

    def noun_phrase(self, depth=0, allow_coord=True):
        """Returns (tokens, agreement) for a non-pronominal NP."""
        r = self.r
        if allow_coord and depth == 0 and self.chance(0.06):
            a, _ = self.noun_phrase(depth + 1, allow_coord=False)
            b, _ = self.noun_phrase(depth + 1, allow_coord=False)
            return a + [("and", "Conj")] + b, "non3sg"
        if self.chance(0.12):
            return [(r.choice(PROPER), "PN")], "3sg"
        plural = self.chance(0.3)
        toks = []
        bare = plural and self.chance(0.3)
        if not bare:
            toks.append((r.choice(PL_DET if plural else SG_DET), "D"))
        if self.chance(0.3):
            if self.chance(0.2):
                toks += [(r.choice(ADJ_MOD), "A"), (r.choice(COLOR), "A")]
            elif self.chance(0.15):
                toks += [("very", "Ad"), (r.choice(ADJ), "A")]
            else:
                toks.append((r.choice(ADJ), "A"))
        if self.chance(0.1):
            toks.append((r.choice(COMMON), "N"))
        head = r.choice(COMMON)
        toks.append((NOUN_FORMS[head] if plural else head, "N"))
        agr = "non3sg" if plural else "3sg"
        if depth == 0 and self.chance(0.12):
            toks.append((r.choice(PREP + ["of"]), "P"))
            sub, _ = self.noun_phrase(depth + 1, allow_coord=False)
            toks += sub
        elif depth == 0 and self.chance(0.06):
            toks.append(("that", "Comp"))
            if self.chance(0.5):
                toks += self.verb_group(agr, r.choice(TRANS)) + self.object_np(depth + 1)
            else:
                subj, sagr = self.subject(depth + 1)
                toks += subj + self.verb_group(sagr, r.choice(TRANS))
        return toks, agr

    def subject(self, depth=0):
        if self.chance(0.35):
            p, agr = self.r.choice(SUBJ_PRON)
            return [(p, "Pron")], agr
        return self.noun_phrase(depth)

    def object_np(self, depth=0):
        if self.chance(0.25):
            return [(self.r.choice(OBJ_PRON), "Pron")]
        return self.noun_phrase(depth)[0]

    def verb_group(self, agr, frame_verb):
        """Finite verb group ending in the main verb `frame_verb` (a root)."""
        r = self.r
        base, sg3, past, ppart, _ = VERB_FORMS[frame_verb]
        choice = r.random()
        if choice < 0.45:
            return [(past, "V")]
        if choice < 0.7:
            return [(sg3 if agr == "3sg" else base, "V")]
        if choice < 0.82:
            return [("will", "V"), (base, "V")]
        if choice < 0.94:
            return [("has" if agr == "3sg" else "have", "V"), (ppart, "V")]
        return [("has" if agr == "3sg" else "have", "V"), ("to", "V"), (base, "V")]

    def clause(self, depth=0):
        r = self.r
        subj, agr = self.subject(depth)
        kind = r.random()
        if kind < 0.3:
            verb = r.choice(INTRANS)
            vp = self.verb_group(agr, verb)
            if self.chance(0.3):
                vp.append((r.choice(PREP), "P"))
                vp += self.object_np(depth + 1)
        elif kind < 0.7:
            verb = r.choice(TRANS)
            vp = self.verb_group(agr, verb) + self.object_np(depth)
        elif kind < 0.78:
            verb = r.choice(DITRANS)
            vp = self.verb_group(agr, verb) + self.object_np(1) + self.object_np(1)
        elif kind < 0.86:
            verb, part = r.choice(PARTICLE)
            vp = self.verb_group(agr, verb) + [(part, "PL")] + self.object_np(1)
        elif kind < 0.93:
            verb, prep = r.choice(PREP_VERB)
            vp = self.verb_group(agr, verb) + [(prep, "P")] + self.object_np(1)
        elif depth == 0:
            verb = r.choice(SENTENTIAL)
            vp = self.verb_group(agr, verb)
            if self.chance(0.5):
                vp.append(("that", "Comp"))
            vp += self.clause(depth + 1)
        else:
            vp = self.verb_group(agr, "see") + self.object_np(1)
        if self.chance(0.15):
            vp.append((r.choice(["yesterday", "today", "again", "quickly", "slowly"]), "Ad"))
        return subj + vp


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--train", type=int, default=500)
    ap.add_argument("--heldout", type=int, default=50)
    args = ap.parse_args()
    gen = Gen(random.Random(args.seed))
    sents, seen = [], set()
    while len(sents) < args.train + args.heldout:
        s = gen.clause()
        key = " ".join(w for w, _ in s)
        if key in seen or len(s) > 14:
            continue
        seen.add(key)
        sents.append(s)
    os.makedirs(args.out, exist_ok=True)
    for name, part in [("train.tagged", sents[: args.train]), ("heldout.tagged", sents[args.train:])]:
        with open(os.path.join(args.out, name), "w") as f:
            f.write("; generated by scripts/gen_corpus.py --seed %d\n" % args.seed)
            for s in part:
                f.write(" ".join(f"{w}_{t}" for w, t in s) + "\n")


if __name__ == "__main__":
    main()
