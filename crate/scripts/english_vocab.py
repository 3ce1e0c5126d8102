"""Vocabulary of the bundled English fragment, shared by the data generators."""

# singular, plural
NOUNS = [
    ("map", "maps"), ("road", "roads"), ("store", "stores"), ("man", "men"),
    ("woman", "women"), ("dog", "dogs"), ("telescope", "telescopes"),
    ("book", "books"), ("owner", "owners"), ("picture", "pictures"),
    ("house", "houses"), ("city", "cities"), ("river", "rivers"), ("car", "cars"),
    ("child", "children"), ("friend", "friends"), ("letter", "letters"),
    ("problem", "problems"), ("street", "streets"), ("table", "tables"),
    ("window", "windows"), ("garden", "gardens"), ("park", "parks"),
    ("tree", "trees"), ("bird", "birds"), ("cat", "cats"), ("teacher", "teachers"),
    ("student", "students"), ("paper", "papers"), ("door", "doors"),
    ("box", "boxes"), ("boat", "boats"), ("train", "trains"), ("office", "offices"),
    ("mountain", "mountains"), ("saw", "saws"), ("key", "keys"), ("girl", "girls"),
    ("boy", "boys"), ("town", "towns"),
]

# base, 3sg, past, past participle, present participle, families
VERBS = [
    ("map", "maps", "mapped", "mapped", "mapping"),
    ("have", "has", "had", "had", "having"),
    ("see", "sees", "saw", "seen", "seeing"),
    ("sleep", "sleeps", "slept", "slept", "sleeping"),
    ("walk", "walks", "walked", "walked", "walking"),
    ("go", "goes", "went", "gone", "going"),
    ("look", "looks", "looked", "looked", "looking"),
    ("give", "gives", "gave", "given", "giving"),
    ("think", "thinks", "thought", "thought", "thinking"),
    ("know", "knows", "knew", "known", "knowing"),
    ("say", "says", "said", "said", "saying"),
    ("find", "finds", "found", "found", "finding"),
    ("buy", "buys", "bought", "bought", "buying"),
    ("read", "reads", "read", "read", "reading"),
    ("write", "writes", "wrote", "written", "writing"),
    ("draw", "draws", "drew", "drawn", "drawing"),
    ("like", "likes", "liked", "liked", "liking"),
    ("open", "opens", "opened", "opened", "opening"),
    ("carry", "carries", "carried", "carried", "carrying"),
    ("visit", "visits", "visited", "visited", "visiting"),
    ("paint", "paints", "painted", "painted", "painting"),
    ("sell", "sells", "sold", "sold", "selling"),
    ("build", "builds", "built", "built", "building"),
    ("run", "runs", "ran", "run", "running"),
    ("arrive", "arrives", "arrived", "arrived", "arriving"),
    ("smile", "smiles", "smiled", "smiled", "smiling"),
    ("wait", "waits", "waited", "waited", "waiting"),
    ("pick", "picks", "picked", "picked", "picking"),
    ("show", "shows", "showed", "shown", "showing"),
    ("store", "stores", "stored", "stored", "storing"),
]

# form, features
PRONOUNS = [
    ("I", "1st,singular,nominative"), ("me", "1st,singular,accusative"),
    ("you", "2nd,non3sg"), ("he", "3rd,singular,nominative"),
    ("him", "3rd,singular,accusative"), ("she", "3rd,singular,nominative"),
    ("her", "3rd,singular,accusative"), ("it", "3rd,singular"),
    ("we", "1st,plural,nominative"), ("us", "1st,plural,accusative"),
    ("they", "3rd,plural,nominative"), ("them", "3rd,plural,accusative"),
]

PROPER = ["John", "Mary", "Paris", "London", "Pat", "Kim"]

ADJECTIVES = ["old", "new", "dark", "light", "blue", "big", "small", "red", "green",
              "tall", "young", "long", "good", "happy", "black", "white", "little", "fat"]
# adjectives that can modify a following adjective
ADJ_MODIFIERS = ["dark", "light"]

# adverb, trees
ADVERBS = [
    ("quickly", "βvxARB βARBvx"), ("slowly", "βvxARB βARBvx"),
    ("often", "βvxARB βARBvx"), ("never", "βARBvx"),
    ("yesterday", "βvxARB"), ("today", "βvxARB"), ("again", "βvxARB"),
    ("there", "βvxARB"), ("here", "βvxARB"),
    ("very", "βARBa"), ("really", "βARBa βARBvx"),
]

PREPOSITIONS = ["at", "in", "on", "with", "of", "to", "for", "near", "from", "under", "by", "about"]

# form, root, features
DETERMINERS = [
    ("a", "a", "singular"), ("an", "a", "singular"), ("the", "the", "-"),
    ("this", "this", "singular"), ("these", "this", "plural"),
    ("those", "that", "plural"), ("every", "every", "singular"),
    ("some", "some", "-"), ("my", "my", "-"), ("his", "his", "-"),
    ("their", "their", "-"), ("our", "our", "-"), ("your", "your", "-"),
]

CONJUNCTIONS = ["and", "or"]
PARTICLES = ["out", "up", "down"]
COMPLEMENTIZERS = ["that"]
INTERJECTIONS = ["oh", "well"]
