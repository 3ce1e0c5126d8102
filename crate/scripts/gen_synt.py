"""Writes the syntactic database of the English fragment to stdout.

The hand-written entries for `have` and `map` come first; everything else is
generated from the shared vocabulary.
"""

from english_vocab import (ADJ_MODIFIERS, ADJECTIVES, ADVERBS, COMPLEMENTIZERS,
                           CONJUNCTIONS, DETERMINERS, NOUNS, PREPOSITIONS,
                           PRONOUNS, PROPER)

HAND = """\
INDEX: have/26
ENTRY: have
POS: V
TREES: βVvx
FS: #VPr_ind, #VPr_past, #VPr_perfect+
    #VP_ppart, #VP_pass-
EX: he had died; we had died

INDEX: have/27
ENTRY: have
POS: V
TREES: βVvx
FS: #VPr_ind, #VPr_pres, #VPr_perfect+
    #VP_ppart, #VP_pass-
EX: he has died; we have died

INDEX: have/50
ENTRY: have
POS: V
TREES: βVvx
FS: #VP_inf
EX: John has to go to the store.

INDEX: have/69
ENTRY: NP0 have NP1
POS: NP0 V NP1
FAM: Tnx0Vnx1
FS: #TRANS+
EX: John has a problem.

INDEX: map/1
ENTRY: NP0 map out NP1
POS: NP0 V PL NP1
FAM: Tnx0Vplnx1

INDEX: map/2
ENTRY: NP0 map NP1
POS: NP0 V NP1
FAM: Tnx0Vnx1

INDEX: map/3
ENTRY: map
POS: N
TREES: αN , αNXdxN , βNn
FS: #N_wh-, #N_refl-

INDEX: map/4
ENTRY: map
POS: N
TREES: αNXN
FS: #N_wh-, #N_refl-, #N_plur

INDEX: will/1
ENTRY: will
POS: V
TREES: βVvx
FS: #VP_base
EX: they will map out the roads

INDEX: to/2
ENTRY: to
POS: V
TREES: βVvx
FS: #VPr_inf, #VP_base
EX: he has to go
"""

# root -> list of (entry words, POS words, families)
VERB_FRAMES = {
    "see": [("Tnx0Vnx1",)],
    "sleep": [("Tnx0V",)],
    "walk": [("Tnx0V",)],
    "go": [("Tnx0V",)],
    "look": [("NP0 look at NP1", "NP0 V P NP1", "Tnx0Vpnx1"), ("Tnx0V",)],
    "give": [("Tnx0Vnx1nx2",), ("Tnx0Vnx1",)],
    "think": [("Tnx0Vs1",), ("Tnx0V",)],
    "know": [("Tnx0Vs1",), ("Tnx0Vnx1",)],
    "say": [("Tnx0Vs1",)],
    "find": [("Tnx0Vnx1",)],
    "buy": [("Tnx0Vnx1",)],
    "read": [("Tnx0Vnx1",), ("Tnx0V",)],
    "write": [("Tnx0Vnx1",), ("Tnx0V",)],
    "draw": [("Tnx0Vnx1",), ("Tnx0V",)],
    "like": [("Tnx0Vnx1",)],
    "open": [("Tnx0Vnx1",)],
    "carry": [("Tnx0Vnx1",)],
    "visit": [("Tnx0Vnx1",)],
    "paint": [("Tnx0Vnx1",)],
    "sell": [("Tnx0Vnx1",)],
    "build": [("Tnx0Vnx1",)],
    "run": [("Tnx0V",)],
    "arrive": [("Tnx0V",)],
    "smile": [("Tnx0V",)],
    "wait": [("NP0 wait for NP1", "NP0 V P NP1", "Tnx0Vpnx1"), ("Tnx0V",)],
    "pick": [("NP0 pick up NP1", "NP0 V PL NP1", "Tnx0Vplnx1")],
    "show": [("Tnx0Vnx1nx2",), ("Tnx0Vnx1",)],
    "store": [("Tnx0Vnx1",)],
}

SIMPLE_FRAME = {
    "Tnx0V": ("NP0 {v}", "NP0 V"),
    "Tnx0Vnx1": ("NP0 {v} NP1", "NP0 V NP1"),
    "Tnx0Vnx1nx2": ("NP0 {v} NP1 NP2", "NP0 V NP1 NP2"),
    "Tnx0Vs1": ("NP0 {v} S1", "NP0 V S1"),
}


def entry(index, words, pos, trees=None, fam=None, fs=None):
    out = [f"INDEX: {index}", f"ENTRY: {words}", f"POS: {pos}"]
    if trees:
        out.append(f"TREES: {trees}")
    if fam:
        out.append(f"FAM: {fam}")
    if fs:
        out.append(f"FS: {fs}")
    return "\n".join(out) + "\n"


def main():
    blocks = [HAND]
    for root, frames in VERB_FRAMES.items():
        for i, frame in enumerate(frames, 1):
            if len(frame) == 3:
                words, pos, fam = frame
            else:
                fam = frame[0]
                w, pos = SIMPLE_FRAME[fam]
                words = w.format(v=root)
            blocks.append(entry(f"{root}/{i}", words, pos, fam=fam))
    for sg, _ in NOUNS:
        if sg == "map":
            continue
        blocks.append(entry(f"{sg}/3", sg, "N", trees="αN , αNXdxN , βNn", fs="#N_wh-, #N_refl-"))
        blocks.append(entry(f"{sg}/4", sg, "N", trees="αNXN", fs="#N_wh-, #N_refl-, #N_plur"))
    for name in PROPER:
        blocks.append(entry(f"{name}/1", name, "PN", trees="αNXN", fs="#N_wh-"))
    for form, _ in PRONOUNS:
        blocks.append(entry(f"{form}/1", form, "Pron", trees="αNXN"))
    for a in ADJECTIVES:
        trees = "βAn, βAa" if a in ADJ_MODIFIERS else "βAn"
        blocks.append(entry(f"{a}/1", a, "A", trees=trees))
    for a, trees in ADVERBS:
        blocks.append(entry(f"{a}/1", a, "Ad", trees=", ".join(trees.split())))
    for p in PREPOSITIONS:
        trees = "βnxPnx" if p == "of" else "βnxPnx, βvxPnx"
        blocks.append(entry(f"{p}/1", p, "P", trees=trees))
    for root in dict.fromkeys(r for _, r, _ in DETERMINERS):
        blocks.append(entry(f"{root}/1", root, "D", trees="αDXD"))
    for c in CONJUNCTIONS:
        blocks.append(entry(f"{c}/1", c, "Conj", trees="βnx1CONJnx2, βn1CONJn2"))
    for c in COMPLEMENTIZERS:
        blocks.append(entry(f"{c}/2", c, "Comp", trees="βCOMPs"))
    # words missing from the morphological database
    blocks.append(entry("*/1", "*", "N", trees="αN , αNXdxN , βNn, αNXN", fs="#N_wh-"))
    blocks.append(entry("*/2", "*", "PN", trees="αNXN", fs="#N_wh-"))
    blocks.append(entry("*/3", "NP0 * NP1", "NP0 V NP1", fam="Tnx0Vnx1"))
    blocks.append(entry("*/4", "NP0 *", "NP0 V", fam="Tnx0V"))
    blocks.append(entry("*/5", "*", "A", trees="βAn"))
    blocks.append(entry("*/6", "*", "Ad", trees="βvxARB"))
    print("; Syntactic database: one record per INDEX.\n")
    print("\n".join(blocks), end="")


if __name__ == "__main__":
    main()
