#!/usr/bin/env python3
"""Regenerate the bundled resources under crates/core/data/.

Inputs are the unpacked wheels of three public packages:

    cmudict        (CMU Pronouncing Dictionary, BSD-2)
    vaderSentiment (VADER valence lexicon, MIT)
    wordfreq       (English word frequency ranks)

Usage:
    pip download --no-deps cmudict vaderSentiment wordfreq -d wheels
    for w in wheels/*.whl; do python3 -m zipfile -e "$w" unpacked; done
    python3 scripts/build_resources.py unpacked crates/core/data

Output is deterministic for fixed inputs.
"""

import gzip
import random
import re
import sys
from pathlib import Path

import msgpack

LEXICON_SIZE = 5000
POLARIZED_TARGET = 2000
EXCEPTION_EXTRA = 8000

ARPABET = {
    "AA": "A", "AE": "æ", "AH": "@", "AO": "O", "AW": "aU", "AY": "aI",
    "EH": "E", "ER": "@r", "EY": "e", "IH": "I", "IY": "i", "OW": "o",
    "OY": "OI", "UH": "U", "UW": "u",
    "B": "b", "CH": "tS", "D": "d", "DH": "D", "F": "f", "G": "g", "HH": "h",
    "JH": "dZ", "K": "k", "L": "l", "M": "m", "N": "n", "NG": "N", "P": "p",
    "R": "r", "S": "s", "SH": "S", "T": "t", "TH": "T", "V": "v", "W": "w",
    "Y": "j", "Z": "z", "ZH": "Z",
}

# Reference encodings that must survive exactly.
PINNED = {
    "a": "æ",
    "little": "lItæl",
    "abandon": "æb@ndæn",
    "absolutely": "@bs@lutlI",
    "fantastic": "f@nt@stIk",
}

STOPWORDS = """a an the and or but if of at by for with about to from in on up out
is am are was were be been being i me my we our you your he him his she her
it its they them their this that these those so as than then there here
do does did has have had""".split()

# Substitutions applied to tokens before concept extraction.
SUBSTITUTIONS = [
    ("u", "you"), ("r", "are"), ("c", "see"), ("2", "to"), ("4", "for"),
    ("m", "am"), ("n", "and"), ("ur", "your"), ("y", "why"), ("k", "ok"),
    ("im", "i am"), ("b", "be"), ("w", "with"), ("da", "the"), ("dis", "this"),
    ("dat", "that"), ("wat", "what"), ("ya", "you"),
]

# clean word -> microtext spellings used by the synthetic corpora
MICROTEXT = {
    "you": ["u"], "are": ["r"], "see": ["c"], "to": ["2"], "too": ["2"],
    "for": ["4"], "before": ["b4"], "great": ["gr8"],
    "tomorrow": ["2moro", "2morrow", "tmrw"], "tonight": ["2nite", "tonite"],
    "today": ["2day"], "please": ["pls", "plz"], "thanks": ["thx", "thnx"],
    "because": ["coz", "bcoz", "cuz"], "love": ["luv"], "good": ["gud"],
    "what": ["wat"], "when": ["wen"], "your": ["ur"], "why": ["y"],
    "okay": ["k", "okie"], "night": ["nite"], "later": ["l8r"], "wait": ["w8"],
    "mate": ["m8"], "people": ["ppl"], "message": ["msg"], "text": ["txt"],
    "really": ["rly", "rlly"], "dont": ["dnt"], "just": ["jst"],
    "know": ["kno", "knw"], "about": ["abt"], "the": ["da"], "this": ["dis"],
    "that": ["dat"], "someone": ["sum1"], "anyone": ["ne1"],
    "everyone": ["every1"], "have": ["hav"], "like": ["lyk"],
    "happy": ["hapy"], "will": ["wil"], "kill": ["kil"],
    "awesome": ["awsum", "awesum"], "bike": ["byk"], "sucks": ["sux"],
    "little": ["lil"], "nice": ["nyc"], "sorry": ["sry", "sowi"],
    "going": ["goin"], "doing": ["doin"], "nothing": ["nuthin"],
    "coming": ["comin"], "need": ["nid"], "friend": ["frnd"],
    "friends": ["frnds"], "hate": ["h8"], "straight": ["str8"], "late": ["l8"],
    "enough": ["enuf"], "through": ["thru"], "though": ["tho"],
    "class": ["cls"], "time": ["tym"], "morning": ["mornin"],
    "evening": ["evenin"], "dinner": ["dinr"], "already": ["alrdy"],
    "tell": ["tel"], "back": ["bk"], "cool": ["kool"], "school": ["skool"],
    "quick": ["kwik"], "says": ["sez"], "whatever": ["watevr"],
    "never": ["nvr"], "forever": ["4eva"], "everything": ["evrythng"],
    "anything": ["anythng"], "maybe": ["mayb"], "minutes": ["mins"],
    "weekend": ["wkend"], "seriously": ["srsly"], "sleep": ["slp"],
    "sweet": ["swt"], "funny": ["funy"], "crazy": ["crzy"],
    "stupid": ["stoopid"], "amazing": ["amazin"], "beautiful": ["btiful"],
    "right": ["rite"], "wrong": ["rong"], "hello": ["helo"], "movie": ["muvi"],
    "with": ["wif"], "home": ["hme"], "would": ["wud"], "could": ["cud"],
    "should": ["shud"], "said": ["sed"], "tired": ["tyrd"], "bored": ["bord"],
    "miss": ["mis"], "call": ["cal"], "meet": ["meat"],
    "soon": ["sun"], "yes": ["yup"], "no": ["nope"],
    "fun": ["fun"], "now": ["nw"], "how": ["hw"], "got": ["gt"],
    "where": ["wer"], "there": ["ther"], "their": ["thr"],
    "some": ["sum"], "one": ["1"], "something": ["smthg"], "do": ["du"],
    "off": ["of"], "was": ["ws"], "happen": ["hapen"], "pretty": ["prety"],
    "probably": ["prolly"], "girl": ["gal"], "boy": ["boi"],
}
# microtext spellings that are also ordinary words stay out of the blacklist
REAL_WORD_FORMS = {"meat", "sun", "fun", "of", "mis", "gal", "cal"}

MULTIWORD = [
    ("a_little", -0.12), ("absolutely_fantastic", 0.93), ("narrow_minded", -0.6),
    ("not_bad", 0.3), ("very_good", 0.8), ("very_bad", -0.8),
    ("good_luck", 0.6), ("bad_luck", -0.6), ("well_done", 0.7),
    ("thank_you", 0.6), ("no_way", -0.3), ("feel_good", 0.6),
    ("feel_bad", -0.6), ("fall_apart", -0.6), ("give_up", -0.5),
    ("look_forward", 0.5), ("well_being", 0.6), ("high_quality", 0.7),
    ("low_quality", -0.6), ("waste_of_time", -0.8), ("piece_of_cake", 0.5),
    ("best_friend", 0.8), ("good_morning", 0.5), ("good_night", 0.4),
    ("big_deal", -0.1), ("broken_heart", -0.8), ("heart_attack", -0.7),
    ("bad_mood", -0.6), ("good_mood", 0.6), ("good_time", 0.6),
    ("hard_work", 0.3), ("hard_time", -0.5), ("happy_birthday", 0.8),
    ("happy_ending", 0.7), ("open_minded", 0.6), ("kind_hearted", 0.7),
    ("cold_hearted", -0.7), ("short_tempered", -0.5), ("well_known", 0.3),
    ("lose_hope", -0.7), ("make_fun", -0.4), ("fall_in_love", 0.8),
    ("feel_sick", -0.6), ("get_lost", -0.6), ("go_wrong", -0.5),
    ("let_down", -0.6), ("pay_attention", 0.2), ("peace_of_mind", 0.7),
    ("rip_off", -0.7), ("sense_of_humor", 0.6), ("shut_up", -0.5),
    ("stay_calm", 0.4), ("take_care", 0.5), ("wake_up_call", -0.2),
    ("worth_it", 0.6), ("sweet_dreams", 0.6), ("high_school", 0.0),
    ("ice_cream", 0.4), ("birthday_party", 0.5), ("road_trip", 0.3),
    ("first_class", 0.5), ("second_hand", -0.1), ("last_minute", -0.2),
    ("long_time", 0.0), ("no_problem", 0.4), ("so_sorry", -0.4),
    ("miss_you", -0.2), ("love_you", 0.8), ("hate_you", -0.8),
    ("bad_day", -0.6), ("good_day", 0.6), ("nice_day", 0.6),
    ("lovely_day", 0.7), ("terrible_day", -0.8), ("great_job", 0.8),
    ("good_job", 0.7), ("bad_idea", -0.5), ("good_idea", 0.6),
    ("great_idea", 0.7), ("waste_money", -0.6), ("save_money", 0.4),
    ("free_time", 0.4), ("hang_out", 0.3), ("chill_out", 0.3),
    ("freak_out", -0.5), ("stressed_out", -0.6), ("burn_out", -0.6),
    ("break_up", -0.6), ("make_up", 0.1), ("cheer_up", 0.5),
    ("show_off", -0.3), ("sold_out", -0.2), ("work_out", 0.3),
]

# Hand-assigned polarities overriding VADER (or supplying missing values).
OVERRIDES = {
    "dont": -0.55, "didnt": -0.5, "doesnt": -0.5, "cant": -0.5, "wont": -0.45,
    "isnt": -0.45, "wasnt": -0.45, "arent": -0.45, "couldnt": -0.45,
    "wouldnt": -0.45, "shouldnt": -0.4, "havent": -0.4, "hasnt": -0.4,
    "aint": -0.4, "werent": -0.4, "hadnt": -0.4, "not": -0.3, "never": -0.4,
    "reading": 0.1, "ride": 0.0, "morning": 0.0, "tomorrow": 0.0,
    "will": 0.0, "movie": 0.0, "robert": 0.0, "rupert": 0.0, "candy": 0.3,
    "apple": 0.1, "before": 0.0, "world": 0.0, "bike": 0.0,
}

# concepts the bundled lexicon must contain
REQUIRED = [
    "good", "bad", "tomorrow", "before", "morning", "hello", "world", "will",
    "kill", "happy", "dont", "like", "reading", "awesome", "ride", "bike",
    "sucks", "apple", "little", "abandon", "robert", "rupert", "candy",
    "movie", "see", "absolutely", "fantastic", "narrow", "minded",
]

# Polarity suite: (text, gold label).
POLARITY_SUITE = [
    ("I wil kil u", "Negative"),
    ("m so hapy", "Positive"),
    ("i dnt lyk reading", "Negative"),
    ("it is awesum 2 ride byk", "Positive"),
    ("dis movie sux", "Negative"),
    ("u r so gud", "Positive"),
    ("i h8 mondays", "Negative"),
    ("gr8 job mate", "Positive"),
    ("i luv u", "Positive"),
    ("dat was awsum", "Positive"),
    ("u r so stoopid", "Negative"),
    ("i m so sry", "Negative"),
    ("ur so btiful", "Positive"),
    ("dis is amazin", "Positive"),
    ("i m so bord", "Negative"),
    ("wat a nyc day", "Positive"),
    ("i hate dis wether", "Negative"),
    ("dat muvi was terible", "Negative"),
    ("u r a gud frnd", "Positive"),
    ("da food was horibl", "Negative"),
    ("dis is so funy", "Positive"),
    ("i m so tyrd of dis", "Negative"),
    ("wat a swt gal", "Positive"),
    ("i m so angri", "Negative"),
    ("ur da best", "Positive"),
    ("dis is rong", "Negative"),
    ("dis song is so cul", "Positive"),
    ("i am so exited", "Positive"),
    ("he is so crzy", "Negative"),
    ("i feel sik", "Negative"),
    ("dat was so borin", "Negative"),
    ("u r so kind", "Positive"),
    ("i am feeling gr8", "Positive"),
    ("wat a lovly nite", "Positive"),
    ("i m so sad", "Negative"),
    ("such a gud idea", "Positive"),
    ("da traffic is terribl", "Negative"),
    ("i wil c u 2moro", "Neutral"),
    ("meet me at da station", "Neutral"),
    ("wat time is it", "Neutral"),
]


def load_cmu(root):
    pron = {}
    for line in open(root / "cmudict" / "data" / "cmudict.dict", encoding="utf-8"):
        line = line.split("#")[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0]
        if "(" in word:
            continue
        word = word.replace("'", "")
        # tokens are squeezed before lookup, so triple letters never match
        if not re.fullmatch(r"[a-z]+", word) or word in pron or re.search(r"(.)\1\1", word):
            continue
        phones = [re.sub(r"\d", "", p) for p in parts[1:]]
        pron[word] = "".join(ARPABET[p] for p in phones)
    return pron


def load_vader(root):
    val = {}
    path = root / "vaderSentiment" / "vader_lexicon.txt"
    for line in open(path, encoding="utf-8"):
        parts = line.rstrip("\n").split("\t")
        if re.fullmatch(r"[a-z]+", parts[0]):
            val[parts[0]] = float(parts[1])
    return val


def load_ranks(root):
    data = msgpack.load(
        gzip.open(root / "wordfreq" / "data" / "small_en.msgpack.gz"), raw=False
    )
    ranks = {}
    for bucket in data[1:]:
        for w in bucket:
            w = w.replace("'", "").replace("’", "")
            if re.fullmatch(r"[a-z]+", w) and w not in ranks:
                ranks[w] = len(ranks)
    return ranks


def microtext_forms():
    forms = set()
    for outs in MICROTEXT.values():
        forms.update(outs)
    for key, _ in SUBSTITUTIONS:
        forms.add(key)
    return {f for f in forms if f not in REAL_WORD_FORMS}


def polarity_of(word, vader):
    if word in OVERRIDES:
        return OVERRIDES[word]
    if word in vader:
        return round(vader[word] / 4.0, 3)
    return 0.0


def build_lexicon(cmu, vader, ranks):
    banned = microtext_forms() | set(STOPWORDS)
    eligible = [
        w for w in sorted(ranks, key=ranks.get)
        if w in cmu and len(w) >= 2 and w not in banned
    ]
    chosen = set(REQUIRED)
    for token in (t for c, _ in MULTIWORD for t in c.split("_")):
        if token not in STOPWORDS:
            chosen.add(token)
    polarized = [w for w in eligible if polarity_of(w, vader) != 0.0]
    for w in polarized[:POLARIZED_TARGET]:
        chosen.add(w)
    single_budget = LEXICON_SIZE - len(MULTIWORD)
    for w in eligible:
        if len(chosen) >= single_budget:
            break
        chosen.add(w)
    fallback = len(ranks)
    rows = [(ranks.get(w, fallback), w, polarity_of(w, vader)) for w in chosen]
    for concept, pol in MULTIWORD:
        rank = max(ranks.get(t, fallback) for t in concept.split("_"))
        rows.append((rank, concept, pol))
    rows.sort(key=lambda r: (r[0], r[1]))
    return [(c, p) for _, c, p in rows]


def build_exceptions(cmu, ranks, lexicon):
    banned = {f for f in microtext_forms() if len(f) > 1}
    words = set()
    for concept, _ in lexicon:
        words.update(concept.split("_"))
    words.update(STOPWORDS)
    frequent = [w for w in sorted(ranks, key=ranks.get) if w in cmu]
    words.update(frequent[:EXCEPTION_EXTRA])
    words.update("abcdefghijklmnopqrstuvwxyz")
    words.update(["zero", "one", "two", "three", "four", "five", "six",
                  "seven", "eight", "nine", "tymczak"])
    out = {}
    for w in words:
        if w in banned and w not in PINNED:
            continue
        if w in PINNED:
            out[w] = PINNED[w]
        elif w in cmu:
            out[w] = cmu[w]
    return dict(sorted(out.items()))


CORES = [
    "are you coming to the party tonight",
    "i will see you tomorrow before class",
    "what time are you going home",
    "please call me when you get back",
    "thanks for the message i will tell everyone",
    "i dont know what to do about this",
    "you are really a good friend",
    "wait for me at the station i am late",
    "i love you so much",
    "are you going to school tomorrow",
    "i need to sleep i am so tired",
    "see you later at the movie",
    "what are you doing this weekend",
    "that was a great movie",
    "have a good night",
    "good morning how are you today",
    "i am coming home in ten minutes",
    "why are you so late",
    "just tell me the time",
    "okay i will wait for you",
    "sorry i was busy with class",
    "this is really awesome",
    "can you text me the address please",
    "i hate waiting for the bus",
    "dinner is ready come home",
    "you should call your mother",
    "i would like to meet your friends",
    "that is so funny",
    "i am going to the library to study",
    "what happened to you yesterday",
    "do you want to have dinner tonight",
    "i will be there in five minutes",
    "my phone is dead so text me later",
    "are you free this evening",
    "let me know when you are done",
    "i miss you a lot",
    "where are you now",
    "thanks for everything you did",
    "i think it will rain today",
    "please bring the book tomorrow",
    "the exam was really hard",
    "we should go out this weekend",
    "happy birthday to you my friend",
    "i cannot find my keys",
    "that movie was so stupid",
    "have you eaten your dinner",
    "nothing much just watching television",
    "are you sure about that",
    "i will send you the notes tonight",
    "it is a beautiful day",
    "the weather is nice today",
    "i am sorry for being late",
    "could you pick me up from school",
    "i got a new bike",
    "the food was amazing",
    "what do you want for lunch",
    "everyone is waiting for you",
    "tell your brother i said hello",
    "i just woke up",
    "meet me at the usual place",
    "why did you not reply",
    "i already finished my homework",
    "can we talk tomorrow morning",
    "do not forget to bring your laptop",
    "you look great today",
    "the meeting is at four",
    "i am bored at home",
    "my sister is coming to visit",
    "that sounds like a good idea",
    "i have to work late tonight",
]
OPENERS = ["", "", "", "hey", "okay", "sorry", "hello", "well", "oh"]
CLOSERS = ["", "", "", "later", "tomorrow", "tonight", "please", "thanks",
           "okay", "then", "soon"]


def microtextify(sentence, rng, min_changes=2):
    words = sentence.split()
    changed = 0
    out = []
    for w in words:
        forms = MICROTEXT.get(w)
        if forms and rng.random() < 0.85:
            out.append(rng.choice(forms))
            changed += 1
        else:
            out.append(w)
    if changed < min_changes:
        idx = [i for i, w in enumerate(out) if len(w) >= 4 and w in words]
        rng.shuffle(idx)
        for i in idx[: min_changes - changed]:
            w = out[i]
            out[i] = w[0] + re.sub(r"[aeiou]", "", w[1:])
            changed += 1
    if rng.random() < 0.15:
        i = rng.randrange(len(out))
        m = re.search(r"[aeiouy]", out[i])
        if m:
            out[i] = out[i][: m.end()] + m.group(0) * rng.randint(3, 6) + out[i][m.end():]
    return " ".join(out)


def draw_clean(rng, n, exclude=()):
    seen = set(exclude)
    out = []
    while len(out) < n:
        s = " ".join(
            p for p in (rng.choice(OPENERS), rng.choice(CORES), rng.choice(CLOSERS)) if p
        )
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def write(path, lines):
    path.write_text("".join(l + "\n" for l in lines), encoding="utf-8")


def main():
    root = Path(sys.argv[1])
    out = Path(sys.argv[2])
    cmu = load_cmu(root)
    vader = load_vader(root)
    ranks = load_ranks(root)

    lexicon = build_lexicon(cmu, vader, ranks)
    assert len(lexicon) == LEXICON_SIZE, len(lexicon)
    write(out / "lexicon.tsv", ["concept\tpolarity"] + [f"{c}\t{p}" for c, p in lexicon])

    exceptions = build_exceptions(cmu, ranks, lexicon)
    write(out / "g2p_exceptions.tsv", [f"{w}\t{ipa}" for w, ipa in exceptions.items()])

    write(out / "stopwords.txt", STOPWORDS)
    write(out / "substitutions.tsv", [f"{a}\t{b}" for a, b in SUBSTITUTIONS])

    rng = random.Random(20190401)
    clean = draw_clean(rng, 200)
    write(out / "gate_corpus.tsv", [f"{microtextify(s, rng)}\t{s}" for s in clean])

    rng = random.Random(7)
    iv = draw_clean(rng, 50, exclude=clean)
    oov = [microtextify(s, rng) for s in draw_clean(rng, 50, exclude=clean + iv)]
    mixed = [f"{s}\tIV" for s in iv] + [f"{s}\tOOV" for s in oov]
    rng.shuffle(mixed)
    write(out / "gating_mix.tsv", ["text\tlabel"] + mixed)

    write(out / "polarity_suite.tsv", ["text\tgold"] + [f"{t}\t{g}" for t, g in POLARITY_SUITE])
    print(f"lexicon={len(lexicon)} exceptions={len(exceptions)}")


if __name__ == "__main__":
    main()
