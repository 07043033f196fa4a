#!/usr/bin/env python3
"""Regenerates the plain-text lexicons under core/data.

Outputs are deterministic and checked in; rerun only when the word lists
below change. Each file is one entry per line, sorted where noted.
"""

import os
import re

OUT = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "core", "data")

DETERMINERS = """the a an this these those each every some any no another both all either neither
such several many much more most few fewer little less enough""".split()

PRONOUNS = """i you he she it we they me him her us them mine yours his hers ours theirs its
myself yourself himself herself itself ourselves yourselves themselves who whom whose which what
someone anyone everyone nobody somebody anybody everybody something anything everything nothing
one ones other others""".split()

ADPOSITIONS = """in on at by with from of for about over under between through during against
into onto upon within without across behind beyond near above below along around beside besides
despite except inside outside toward towards underneath via amid among per off past""".split()

AUXILIARIES = """am is are was were be been being have has had do does did will would can could
shall should may might must""".split()

CCONJ = "and but or nor yet".split()

PARTICLES = "not".split()

INTERJECTIONS = "oh hey wow ah hello goodbye please thanks".split()

NUM_WORDS = """zero one two three four five six seven eight nine ten eleven twelve thirteen
fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty fifty sixty seventy
eighty ninety hundred thousand million billion half dozen""".split()

SUBORDINATORS = """because although though while if unless until since when whenever where
wherever after before once whereas""".split()

ADVERBS = """very also just now then here there always never often sometimes again soon too
quite rather almost already still even only perhaps maybe together away back forward yesterday
today tomorrow instead anyway however therefore moreover meanwhile nevertheless otherwise
indeed certainly probably usually rarely seldom twice once everywhere nowhere somewhere
early late fast hard well far enough ago yes tonight downstairs upstairs outside inside
abroad ahead apart aside altogether",""".split()

# Base verbs conjugated below; irregular past forms listed separately.
VERBS = """be have do say go get make know think take see come want look use find give tell
work call try ask need feel become leave put mean keep let begin seem help talk turn start
show hear play run move like live believe hold bring happen write provide sit stand lose pay
meet include continue set learn change lead understand watch follow stop create speak read
allow add spend grow open walk win offer remember love consider appear buy wait serve die
send expect build stay fall cut reach kill remain suggest raise pass sell require report
decide pull return explain hope develop carry break receive agree support hit produce eat
cover catch draw choose cause point listen realize place close involve wonder visit travel
drive push wash cook clean jump smile laugh cry sleep dream dance sing paint plant rain snow
shine climb swim fly float sail drift wander rest arrive depart enter exit borrow lend repair
fix examine inspect observe notice describe discuss argue claim state mention announce reply
answer question study teach train practice improve measure compare share divide collect gather
store save waste spend deliver ship pack unpack fill empty pour drink taste smell touch throw
lift drop shake bend fold stretch press pull""".split()

IRREGULAR_PAST = {
    "be": ["was", "were"], "have": ["had"], "do": ["did"], "say": ["said"], "go": ["went"],
    "get": ["got"], "make": ["made"], "know": ["knew", "known"], "think": ["thought"],
    "take": ["took", "taken"], "see": ["saw", "seen"], "come": ["came"], "find": ["found"],
    "give": ["gave", "given"], "tell": ["told"], "feel": ["felt"], "become": ["became"],
    "leave": ["left"], "mean": ["meant"], "keep": ["kept"], "let": ["let"],
    "begin": ["began", "begun"], "hear": ["heard"], "run": ["ran"], "hold": ["held"],
    "bring": ["brought"], "write": ["wrote", "written"], "sit": ["sat"], "stand": ["stood"],
    "lose": ["lost"], "pay": ["paid"], "meet": ["met"], "set": ["set"], "learn": ["learned"],
    "lead": ["led"], "understand": ["understood"], "speak": ["spoke", "spoken"],
    "read": ["read"], "grow": ["grew", "grown"], "win": ["won"], "buy": ["bought"],
    "fall": ["fell", "fallen"], "cut": ["cut"], "sell": ["sold"], "break": ["broke", "broken"],
    "hit": ["hit"], "eat": ["ate", "eaten"], "catch": ["caught"], "draw": ["drew", "drawn"],
    "choose": ["chose", "chosen"], "drive": ["drove", "driven"], "sleep": ["slept"],
    "fly": ["flew", "flown"], "swim": ["swam", "swum"], "throw": ["threw", "thrown"],
    "shake": ["shook", "shaken"], "bend": ["bent"], "send": ["sent"], "spend": ["spent"],
    "teach": ["taught"], "shine": ["shone"], "cry": ["cried"], "carry": ["carried"],
    "study": ["studied"],
}

NOUNS = """time year people way day man woman child world life hand part eye place work week
case point government company number group problem fact night home water room mother father
area money story month book word business issue side kind head house friend hour game line
end member law car city name team minute idea body information face door history result
morning reason research girl boy guy moment air teacher education person art war party
question school state family student country president city house service thing model market
paper language gun film example food theory agency control process music market sense nation
plan college interest death experience effect use class road care field office horse dog cat
bird fish tree flower grass stone river lake ocean mountain valley forest desert island beach
sky cloud star moon sun rain snow wind storm fire ice light shadow color sound voice noise
music song letter page picture map plan kitchen garden window wall floor roof bridge tower
castle village town street corner market shop store bread milk cheese fruit apple orange
banana vegetable potato rice meat chicken egg sugar salt coffee tea wine bottle glass plate
knife fork spoon table chair bed couch lamp clock phone computer screen machine engine wheel
boat train plane ticket journey trip holiday guest visitor neighbor doctor nurse farmer
driver writer painter singer dancer player manager worker builder scientist lawyer judge
police soldier captain king queen prince princess leader speaker audience crowd juice
breakfast lunch dinner evening afternoon noon midnight winter spring summer autumn season
weather temperature north south east west center edge middle top bottom front surface
ground soil sand dust metal gold silver iron wood paper cloth wool cotton leather box bag
basket bucket rope chain wire tool hammer nail screw ladder bell drum horn guitar piano
violin stage theater museum library hospital church temple palace prison farm barn fence
gate path trail track signal sign banner flag prize reward gift toy ball doll kite rope
puzzle card dice coin purse wallet pocket button zipper collar sleeve shirt dress coat hat
shoe boot sock glove scarf belt ring necklace crown mirror comb brush soap towel blanket
pillow curtain carpet shelf drawer cabinet key lock handle switch button lever pump pipe
tank tub sink oven stove pan pot kettle cup mug jar lid tray napkin menu bill receipt tax
salary wage profit loss debt loan bank account budget price cost value trade deal contract
meeting schedule deadline project task goal step stage level grade score record list item
detail note message report article review essay poem novel chapter title author reader
editor printer copy version edition volume series episode scene actor actress director
camera photo image video screen signal channel network website email address code password
system program file folder document data figure chart graph table row column cell unit
measure weight height width length depth distance speed rate ratio total sum average
difference balance limit range scale degree percent portion share piece slice section part
segment fraction element factor feature aspect
quality quantity amount bunch pile stack heap layer row line queue crowd herd flock pack""".split()

ADJECTIVES = """good new first last long great little own other old right big high different
small large next early young important few public bad same able free sure true full special
easy clear recent certain personal open red blue green yellow black white brown gray pink
purple golden silver bright dark pale deep shallow wide narrow thick thin heavy light strong
weak fast slow quick quiet loud soft hard smooth rough warm cold hot cool wet dry clean dirty
fresh stale sweet sour bitter salty rich poor cheap expensive rare common simple complex
modern ancient tall short round square flat sharp dull empty busy lazy brave shy proud humble
happy sad angry calm nervous eager bored tired awake asleep hungry thirsty healthy sick safe
dangerous gentle fierce kind cruel polite rude honest clever wise foolish lucky careful
careless curious patient serious funny strange familiar famous unknown silent noisy crowded
lonely friendly distant close near far local foreign national global northern southern eastern
western central final initial main minor major single double triple extra spare whole broken
perfect ideal typical unusual ordinary remarkable pleasant terrible wonderful awful beautiful
ugly pretty handsome elegant plain fancy neat messy tidy solid liquid frozen melted raw ripe
rotten tender tough crisp juicy dusty muddy sandy rocky grassy leafy shady sunny cloudy rainy
snowy windy stormy foggy misty damp moist""".split()

NORP = """American British French German Egyptian Chinese Japanese Russian Italian Spanish
Greek Roman Turkish Indian Canadian Mexican Brazilian Dutch Swedish Norwegian Danish Polish
Korean Vietnamese Australian Austrian Swiss Belgian Portuguese Irish Scottish Welsh Finnish
Hungarian Czech Moroccan Tunisian Lebanese Syrian Persian Christian Christians Muslim Muslims
Jewish Buddhist Buddhists Hindu Hindus Catholic Catholics Protestant Protestants Democrat
Democrats Republican Republicans Socialist Socialists Communist Communists Liberal Liberals
Conservative Conservatives""".split()

GPE = [
    "France", "Paris", "Egypt", "Cairo", "London", "England", "Britain", "America", "Rome",
    "Italy", "Spain", "Madrid", "Germany", "Berlin", "Russia", "Moscow", "China", "Beijing",
    "Japan", "Tokyo", "India", "Delhi", "Canada", "Toronto", "Ottawa", "Mexico", "Brazil",
    "Chicago", "Boston", "Texas", "California", "Vienna", "Austria", "Greece", "Athens",
    "Turkey", "Istanbul", "Portugal", "Lisbon", "Ireland", "Dublin", "Scotland", "Edinburgh",
    "Poland", "Warsaw", "Sweden", "Stockholm", "Norway", "Oslo", "Denmark", "Copenhagen",
    "Finland", "Helsinki", "Hungary", "Budapest", "Morocco", "Rabat", "Tunisia", "Lebanon",
    "Beirut", "Syria", "Damascus", "Korea", "Seoul", "Vietnam", "Hanoi", "Australia", "Sydney",
    "New York", "New Orleans", "Los Angeles", "San Francisco", "United States", "United Kingdom",
    "Saudi Arabia", "South Africa", "New Zealand", "Hong Kong", "Buenos Aires", "Rio de Janeiro",
]

LAW_MARKERS = "Act Law Treaty Constitution Amendment Code Bill".split()

MONEY_UNITS = """dollar dollars euro euros pound pounds cent cents franc francs yen dinar
dinars peso pesos shilling shillings""".split()

ORDINALS = """first second third fourth fifth sixth seventh eighth ninth tenth eleventh
twelfth thirteenth fourteenth fifteenth sixteenth seventeenth eighteenth nineteenth twentieth
thirtieth fortieth fiftieth sixtieth seventieth eightieth ninetieth hundredth thousandth""".split()

STOPWORDS = """a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during each few for
from further had has have having he her here hers herself him himself his how i if in into is
it its itself just me more most my myself no nor not now of off on once only or other our ours
ourselves out over own same she should so some such than that the their theirs them themselves
then there these they this those through to too under until up very was we were what when
where which while who whom why will with you your yours yourself yourselves""".split()

# Synonym pairs for the paraphrase corpus; both sides share a coarse POS.
SYNONYMS = [
    ("big", "large"), ("small", "little"), ("fast", "quick"), ("happy", "glad"),
    ("sad", "unhappy"), ("smart", "clever"), ("begin", "start"), ("end", "finish"),
    ("buy", "purchase"), ("help", "assist"), ("ask", "question"), ("answer", "reply"),
    ("house", "home"), ("road", "street"), ("child", "kid"), ("friend", "companion"),
    ("angry", "furious"), ("cold", "chilly"), ("hot", "warm"), ("old", "ancient"),
    ("new", "recent"), ("story", "tale"), ("ocean", "sea"), ("forest", "woods"),
    ("stone", "rock"), ("gift", "present"), ("error", "mistake"), ("job", "task"),
    ("idea", "notion"), ("speak", "talk"), ("look", "glance"), ("walk", "stroll"),
    ("jump", "leap"), ("shout", "yell"), ("quiet", "silent"), ("wealthy", "rich"),
    ("poor", "broke"), ("strange", "odd"), ("famous", "renowned"), ("tired", "weary"),
    ("brave", "bold"), ("afraid", "scared"), ("beautiful", "lovely"), ("ugly", "hideous"),
    ("clean", "spotless"), ("dirty", "filthy"), ("easy", "simple"), ("hard", "difficult"),
    ("true", "correct"), ("wrong", "incorrect"),
]

VOWELS = set("aeiouy")


def syllables(word):
    letters = [c for c in word.lower() if c.isalpha()]
    if not letters:
        return 1
    groups = len(re.findall(r"[aeiouy]+", "".join(letters)))
    s = "".join(letters)
    if groups > 1 and s.endswith("e") and not s.endswith("le"):
        groups -= 1
    return max(1, groups)


# Short stressed CVC verbs double the final consonant before -ed/-ing.
DOUBLING = set("""get set let put sit run stop plan swim win cut hit drop fit grab hug rub jog
clap wrap stir shut dig pin plug skip slip trip step chat pat pet rot sob tan tap zip""".split())


def verb_past(base):
    if base in IRREGULAR_PAST:
        return IRREGULAR_PAST[base][0]
    if base in DOUBLING:
        return base + base[-1] + "ed"
    if base.endswith("e"):
        return base + "d"
    if base.endswith("y") and len(base) > 2 and base[-2] not in VOWELS:
        return base[:-1] + "ied"
    return base + "ed"


def verb_third(base):
    if base.endswith(("s", "x", "z", "ch", "sh", "o")):
        return base + "es"
    if base.endswith("y") and len(base) > 2 and base[-2] not in VOWELS:
        return base[:-1] + "ies"
    return base + "s"


def verb_ing(base):
    if base in DOUBLING:
        return base + base[-1] + "ing"
    if base.endswith("e") and not base.endswith(("ee", "ye", "oe")):
        return base[:-1] + "ing"
    return base + "ing"


def inflect_verb(base):
    forms = [base]
    forms += IRREGULAR_PAST.get(base, [verb_past(base)])
    forms.append(verb_third(base))
    forms.append(verb_ing(base))
    return forms


def plural(noun):
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and len(noun) > 2 and noun[-2] not in VOWELS:
        return noun[:-1] + "ies"
    return noun + "s"


def build_frequent():
    """Rank order: function words, then verbs with inflections, nouns with
    plurals, adjectives, derived adverbs. Deduplicated keep-first, cut to
    2000; membership in this file is the whole definition of a
    non-sophisticated word."""
    ordered = []
    seen = set()

    def push(words):
        for w in words:
            w = w.lower()
            if w and w not in seen:
                seen.add(w)
                ordered.append(w)

    push(STOPWORDS)
    push(DETERMINERS + PRONOUNS + ADPOSITIONS + AUXILIARIES + CCONJ + PARTICLES)
    push(SUBORDINATORS + NUM_WORDS + ADVERBS + INTERJECTIONS)
    for v in VERBS:
        push(inflect_verb(v))
    for n in NOUNS:
        push([n, plural(n)])
    push(ADJECTIVES)
    push([a + "ly" for a in ADJECTIVES if not a.endswith("ly")][:200])
    push([w.lower() for w in MONEY_UNITS])
    push(ORDINALS)
    return ordered[:2000]


def write(path, lines):
    with open(os.path.join(OUT, path), "w") as f:
        for line in lines:
            f.write(line + "\n")
    print(f"{path}: {len(lines)} entries")


def main():
    os.makedirs(OUT, exist_ok=True)
    frequent = build_frequent()
    write("frequent_words.txt", frequent)

    # Age of acquisition in years: earlier for frequent short words, later
    # for rare long ones. Formula is arbitrary but fixed; the value file,
    # not the formula, is the contract.
    rank = {w: i for i, w in enumerate(frequent)}
    aoa_words = sorted(set(frequent))
    aoa_lines = []
    for w in aoa_words:
        r = rank.get(w, 2000)
        age = 2.0 + 9.0 * (r / 2000.0) + 0.4 * syllables(w)
        age = min(17.0, max(2.0, round(age, 1)))
        aoa_lines.append(f"{w}\t{age}")
    write("aoa.txt", aoa_lines)

    write("stopwords.txt", sorted(set(STOPWORDS)))
    write("subordinators.txt", sorted(set(SUBORDINATORS)))

    tagged = {}

    def tag(words, t):
        for w in words:
            w = w.lower()
            if w not in tagged:
                tagged[w] = t

    # Closed classes first so an ambiguous surface gets its function tag.
    tag(AUXILIARIES, "AUX")
    tag(DETERMINERS, "DET")
    tag(PRONOUNS, "PRON")
    tag(ADPOSITIONS, "ADP")
    tag(CCONJ, "CCONJ")
    tag(SUBORDINATORS, "SCONJ")
    tag(PARTICLES, "PART")
    tag(INTERJECTIONS, "INTJ")
    tag(NUM_WORDS, "NUM")
    tag(ADVERBS, "ADV")
    for v in VERBS:
        tag(inflect_verb(v), "VERB")
    for n in NOUNS:
        tag([n, plural(n)], "NOUN")
    tag(ADJECTIVES, "ADJ")
    tag([a + "ly" for a in ADJECTIVES if not a.endswith("ly")], "ADV")
    tag([w.lower() for w in MONEY_UNITS], "NOUN")
    tag(ORDINALS, "ADJ")
    write("pos_lexicon.txt", [f"{w}\t{t}" for w, t in sorted(tagged.items())])

    write("gazetteer_norp.txt", sorted(set(NORP)))
    write("gazetteer_gpe.txt", sorted(set(GPE)))
    write("law_markers.txt", LAW_MARKERS)
    write("money_units.txt", sorted(set(MONEY_UNITS)))
    write("ordinals.txt", ORDINALS)
    write("synonyms.txt", [f"{a}\t{b}" for a, b in SYNONYMS])

    verbs_out = []
    for v in VERBS:
        if v in ("be", "have", "do"):
            continue
        verbs_out.append(f"{v}\t{verb_past(v)}\t{verb_third(v)}\t{verb_ing(v)}")
    write("verb_forms.txt", verbs_out)


if __name__ == "__main__":
    main()
