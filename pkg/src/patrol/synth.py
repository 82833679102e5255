"""Deterministic synthetic evaluation corpus.

Three hundred short message-board entries — 100 harmful, 50 doubtful, 150
normal — written in romanised Japanese with some kana, emoticons, and
character spam, mirroring the phenomena the toolkit targets:

* four flood entries repeat one insult ten times, so instance counting
  inflates its self co-occurrence while per-entry counting does not;
* one insult appears five times as the spelling variant ``kimosu`` and six
  times in canonical form alongside the same second insult, so mapping
  variants to canonicals visibly pools their evidence (5- and 6-entry
  pairs merge into an 11-entry pair);
* a slice of entries carries distorted vulgarities (character spam, kana
  variants) only reachable through the distortion-tolerant matcher;
* harmful entries plant identity exposure, contact data, class labels,
  probing questions, and secret spreading for the rule screen, while
  normal entries stay free of all of it;
* unknown-token runs (gibberish, kana phrases) appear in all classes so
  part-of-speech profiles alone separate the classes poorly.

The generator is pure: a fixed seed drives every choice, so the same
corpus comes out every time.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta
from pathlib import Path

from .corpus import Dataset, Entry, TriLabel, save_dataset

SEED = 20080401

#: insults that rotate freely through harmful templates; the engineered
#: surfaces (baka, kimoi, kimosu, shine) stay out of this list because the
#: de-biasing arithmetic needs their entry counts exact.
ROTATING_VULGAR = [
    "uzai", "kiero", "busu", "debu", "aho", "kasu", "kuzu", "gomi", "hage",
    "manuke", "noroma", "dasai", "shibaku", "korosu", "hentai", "yowamushi",
    "nekura", "tonma", "usotsuki", "kutabare", "zako", "yarou", "kusottare",
    "chibi", "bukimi", "kichigai", "boke", "busaiku",
]

NEGATIVE_WORDS = [
    "mukatsuku", "kirai", "daikirai", "nikui", "unzari", "urusai",
    "uttoushii", "fuyukai", "hidoi", "kudaranai", "mendokusai", "iradatsu",
]

POSITIVE_WORDS = [
    "tanoshii", "ureshii", "suki", "daisuki", "shiawase", "kawaii",
    "suteki", "kirei", "genki", "omoshiroi", "oishii", "yasashii",
]

FAMILY_NAMES = ["Tanaka", "Suzuki", "Satou", "Yamada", "Takahashi", "Watanabe"]
GIVEN_NAMES = ["Tarou", "Hanako", "Jirou", "Akiko"]
LC_NAMES = ["tanaka", "suzuki", "satou", "yamada", "takahashi", "watanabe"]

#: unknown-token filler; first letters chosen so the distortion-tolerant
#: matcher has no same-initial vulgarity to compare against.
GIBBERISH = [
    "wexiv", "orlit", "ixpaq", "rivex", "joxel", "quorv", "elvox",
    "irquno", "ovlix", "exivo", "ruloq", "loxia", "veqor", "xilor",
]

KANA_PHRASES = [
    "きょうはいいてんきですね",
    "おひるごはんおいしい",
    "あしたもがんばるぞ",
    "たのしいいちにちでした",
]

KANA_VULGAR = ["うざい", "あほ", "きえろ", "デブ", "ブス", "アホ"]
DISTORTED_VULGAR = ["uzeee", "daseee", "ahooo", "kuzuuu"]

HAPPY_FACES = ["^o^", "(^_^)", ":D", ";)"]
ANGRY_FACES = ["(-_-#)", "(>_<)"]

SOURCES = ["class-board", "club-board", "anon-board", "mobile-board"]


def _harmful_texts(rng: random.Random) -> list:
    texts: list[str] = []

    # Flood entries: the only places the surface "baka" appears at all.
    for _ in range(4):
        texts.append(" ".join(["baka"] * 10) + " !")

    # Variant/canonical split of one pair: 5 entries with the variant
    # spelling, 6 with the canonical one, same partner insult in all 11.
    fillers = ["aitsu wa", "koitsu wa", "ano yarou wa", "soitsu wa", "aitsu maji"]
    for i in range(5):
        texts.append(f"{fillers[i % len(fillers)]} kimosu da shine yo !")
    for i in range(6):
        texts.append(f"{fillers[(i + 2) % len(fillers)]} kimoi da shine !!")

    # Identity exposure: full names, honorifics.
    for i in range(6):
        family = FAMILY_NAMES[i % len(FAMILY_NAMES)]
        given = GIVEN_NAMES[i % len(GIVEN_NAMES)]
        v = rng.choice(ROTATING_VULGAR)
        texts.append(f"{family} {given} wa {v} da kiero !")
    for i in range(4):
        family = FAMILY_NAMES[(i + 3) % len(FAMILY_NAMES)]
        v = rng.choice(ROTATING_VULGAR)
        texts.append(f"{family}-kun wa {v} da yo minna shitteru")

    # Class labels, phone numbers, street blocks.
    for i in range(4):
        name = LC_NAMES[i % len(LC_NAMES)]
        v = rng.choice(ROTATING_VULGAR)
        texts.append(f"{i + 1}-nen {i + 2}-kumi no {name} wa {v} da")
    for i in range(4):
        name = LC_NAMES[(i + 1) % len(LC_NAMES)]
        texts.append(
            f"{name} no denwa bango wa 090-12{i}4-567{i} da yo mukatsuku {rng.choice(ROTATING_VULGAR)}"
        )
    for i in range(3):
        v = rng.choice(ROTATING_VULGAR)
        texts.append(f"ano {v} wa {i + 2}-choume ni sunderu yo")

    # Probing questions wrapped in abuse.
    texts.append("doko ni sunderu ka oshiete yo ano busu ni iku kara")
    texts.append("aitsu doko ni sunderu no ka shiranai ka mukatsuku yarou da")
    texts.append("kanojo iru no ka hentai me kimogaru wa")
    texts.append("kareshi iru no ka oshiete ano tarashi ni")

    # Secret data dumps.
    for i in range(3):
        a = LC_NAMES[i % len(LC_NAMES)]
        b = LC_NAMES[(i + 2) % len(LC_NAMES)]
        texts.append(f"{a} no honmyou wa {b} {GIVEN_NAMES[i % 4].lower()} da yo {rng.choice(ROTATING_VULGAR)}")
    texts.append("aitsu no juusho wa eki no mae da yo kiero kuzu")
    texts.append("ano ko no denwa bango wa himitsu ja nai yo gomi da yo")

    # Distorted spellings only the tolerant matcher can resolve.
    for i in range(8):
        d = DISTORTED_VULGAR[i % len(DISTORTED_VULGAR)]
        neg = NEGATIVE_WORDS[i % len(NEGATIVE_WORDS)]
        texts.append(f"aitsu maji {d} da {neg} !!")

    # Kana variants of listed insults.
    for i, kv in enumerate(KANA_VULGAR):
        texts.append(f"aitsu wa {kv} da yo {NEGATIVE_WORDS[(i + 3) % len(NEGATIVE_WORDS)]} !")

    # Gibberish plus insult, to spread unknown tokens into this class too.
    for i in range(6):
        g = GIBBERISH[i % len(GIBBERISH)]
        v = rng.choice(ROTATING_VULGAR)
        texts.append(f"{g} nante shiranai kedo {v} wa saitei da")

    # Plain rotating insults.
    plain_templates = [
        "aitsu wa {v} da {neg} !",
        "{name} wa {v} de {v2} da na",
        "ano {v} maji {neg} !!",
        "kuso {v} kiete kure",
        "{v} wa gakkou ni kuru na",
        "minna {name} wo {v} to omou yo",
        "{v} no kao wo miru to {neg}",
        "koitsu {v} sugiru {neg}",
        "{v} {v2} saitei da {face}",
        "damare {v} yagaru na",
        "{v} wa sekai de ichiban {neg} da",
        "omae wa {v} da korosu zo {face}",
    ]
    for i in range(35):
        template = plain_templates[i % len(plain_templates)]
        v = ROTATING_VULGAR[i % len(ROTATING_VULGAR)]
        v2 = ROTATING_VULGAR[(i + 7) % len(ROTATING_VULGAR)]
        texts.append(
            template.format(
                v=v,
                v2=v2,
                neg=rng.choice(NEGATIVE_WORDS),
                name=rng.choice(LC_NAMES),
                face=rng.choice(ANGRY_FACES),
            )
        )
    return texts


def _doubtful_texts(rng: random.Random) -> list:
    texts: list[str] = []
    initials = ["A.B.", "C.D.", "E.F.", "G.H.", "I.J.", "K.L.", "M.N.", "O.P."]
    for i in range(8):
        texts.append(f"{initials[i]} wa dare ka shitteru hito iru ?")
    nicknames = ["ken-kun", "riko-chan", "momo-chan", "yuu-kun", "taka-kun", "mei-chan", "emi-chan", "rin-chan"]
    for i in range(8):
        texts.append(f"{nicknames[i]} wa {rng.choice(LC_NAMES)} no kurasu no hito da yo ne")
    for i in range(6):
        texts.append(
            ["kimi wa nansai na no ?", "ano hito nansai ka na", "sensei wa nansai da to omou ?"][i % 3]
        )
    for i in range(6):
        texts.append(
            [
                "watashi wa ano ko no himitsu wo shitteru yo",
                "aitsu no himitsu wo shitteru kedo iwanai",
                "minna ga kanojo no himitsu wo shitteru no ka na",
            ][i % 3]
        )
    for i in range(6):
        texts.append(
            [
                "aitsu ga uwasa wo nagasu no wa hidoi to omou",
                "dare ga uwasa wo nagasu no ka shiranai",
                "uwasa wo nagasu hito wa kirai da",
            ][i % 3]
        )
    for i in range(4):
        texts.append(f"juusho wa 12{i}-456{i + 1} no machi no hou da yo")
    for i in range(4):
        texts.append(f"{i + 1}-nen no senpai wa kowai hito ga ooi ka na")
    mild = ["chibi", "debu", "noroma", "manuke", "dasai", "zako", "tonma", "busaiku"]
    for i in range(8):
        texts.append(f"ano hito wa chotto {mild[i]} da to omou kedo ne")
    return texts


def _normal_texts(rng: random.Random) -> list:
    templates = [
        "kyou wa ii tenki da ne !",
        "ashita wa ame ga furu ka na",
        "gohan ga oishii {face}",
        "uta wo kiku no ga suki da yo",
        "umi de oyogu no wa tanoshii naa",
        "hon wo yomu to kokoro ga ochitsuku",
        "tomodachi to kouen de asobu yakusoku wo shita",
        "neko ga kawaii ne {face}",
        "tesuto ga dekita yatta !",
        "sakkaa no renshuu wo ganbaru zo !",
        "eiga wo mita sugoi omoshiroi !",
        "keeki to juusu ga oishii {face}",
        "gakkou no jugyou wa muzukashii kedo ganbaru",
        "basu de machi ni iku no wa hayai",
        "usagi to inu ga uchi ni iru yo",
        "gomen ne okureta densha ga osoi",
        "kesa wa samui ne fuyu mitai da",
        "{gib} tte nani ka oshiete",
        "ongaku wo kiku to genki ni naru",
        "manga wo yomu no ga daisuki da",
        "{kana} {pos} da ne",
        "ame de shiai ga nakunatta T_T",
        "yama ni noboru no wa {pos}",
        "ocha wo nomu jikan ga {pos} da",
        "minna de matsuri ni iku yo !",
        "atarashii kutsu wo kau tsumori da",
        "haha no ryouri wa sekai de ichiban oishii",
        "toshokan de shukudai wo yaru yo",
        "kinou no yakyuu no shiai wa sugoi katta ne",
        "piza wo taberu no ga tanoshimi da {face}",
    ]
    texts: list[str] = []
    for i in range(150):
        template = templates[i % len(templates)]
        texts.append(
            template.format(
                face=rng.choice(HAPPY_FACES),
                gib=GIBBERISH[i % len(GIBBERISH)],
                kana=KANA_PHRASES[i % len(KANA_PHRASES)],
                pos=POSITIVE_WORDS[i % len(POSITIVE_WORDS)],
            )
        )
    return texts


def build_corpus(seed: int = SEED) -> Dataset:
    """The full 300-entry labeled corpus; identical output for a seed."""
    rng = random.Random(seed)
    rows = [(t, TriLabel.HARMFUL) for t in _harmful_texts(rng)]
    rows += [(t, TriLabel.DOUBTFUL) for t in _doubtful_texts(rng)]
    rows += [(t, TriLabel.NORMAL) for t in _normal_texts(rng)]
    counts = {label: 0 for label in TriLabel}
    for _, label in rows:
        counts[label] += 1
    assert counts == {TriLabel.HARMFUL: 100, TriLabel.DOUBTFUL: 50, TriLabel.NORMAL: 150}

    rng.shuffle(rows)
    ds = Dataset()
    start = datetime(2008, 4, 1, 0, 0, 0)
    for i, (text, label) in enumerate(rows):
        ds.add(
            Entry(
                id=f"e{i + 1:04d}",
                text=text,
                source=SOURCES[i % len(SOURCES)],
                timestamp=(start + timedelta(minutes=i)).isoformat(),
                label=label,
            )
        )
    return ds


def corpus_path() -> Path:
    """Location of the corpus file shipped inside the package."""
    return Path(__file__).parent / "data" / "synthetic_corpus.jsonl"


def write_corpus(path: str | Path | None = None) -> Path:
    """Regenerate the shipped corpus file (used by the build and tests)."""
    target = Path(path) if path is not None else corpus_path()
    save_dataset(build_corpus(), target)
    return target
