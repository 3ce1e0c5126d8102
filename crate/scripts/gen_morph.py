"""Writes the morphological database of the English fragment to stdout."""

from english_vocab import (ADJECTIVES, ADVERBS, COMPLEMENTIZERS, CONJUNCTIONS,
                           DETERMINERS, INTERJECTIONS, NOUNS, PARTICLES,
                           PREPOSITIONS, PRONOUNS, PROPER, VERBS)


def main():
    rows = []
    for sg, pl in NOUNS:
        rows += [(sg, sg, "N", "singular"), (pl, sg, "N", "plural")]
    for name in PROPER:
        rows.append((name, name, "PN", "singular"))
    for form, feats in PRONOUNS:
        rows.append((form, form, "Pron", feats))
    for base, sg3, past, ppart, ing in VERBS:
        rows += [
            (base, base, "V", "base"),
            (base, base, "V", "non3sg,present"),
            (sg3, base, "V", "3sg,present"),
            (past, base, "V", "past"),
            (ppart, base, "V", "past-participle"),
            (ing, base, "V", "present-participle"),
        ]
    rows += [("will", "will", "V", "present"), ("would", "will", "V", "past"),
             ("to", "to", "V", "infinitive")]
    rows += [(a, a, "A", "-") for a in ADJECTIVES]
    rows += [(a, a, "Ad", "-") for a, _ in ADVERBS]
    rows += [(p, p, "P", "-") for p in PREPOSITIONS]
    rows += [(f, r, "D", feats) for f, r, feats in DETERMINERS]
    rows += [(c, c, "Conj", "-") for c in CONJUNCTIONS]
    rows += [(p, p, "PL", "-") for p in PARTICLES]
    rows += [(c, c, "Comp", "-") for c in COMPLEMENTIZERS]
    rows += [(i, i, "I", "-") for i in INTERJECTIONS]
    seen = set()
    print("; form\troot\tPOS\tinflection")
    for r in rows:
        if r not in seen:
            seen.add(r)
            print("\t".join(r))


if __name__ == "__main__":
    main()
