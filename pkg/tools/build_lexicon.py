"""Regenerate src/loanscore/resources/lexicon.tsv.

Base entries carry hand-assigned polarity/subjectivity weights; inflected
variants inherit the base word's weights. Output is sorted and stable, so
the bundled file's SHA-256 is reproducible.
"""

import pathlib

# (word, polarity, subjectivity)
BASE = [
    ("good", 0.7, 0.6), ("bad", -0.7, 0.67), ("great", 0.8, 0.75),
    ("excellent", 1.0, 1.0), ("terrible", -1.0, 1.0), ("awful", -1.0, 1.0),
    ("amazing", 0.6, 0.9), ("horrible", -1.0, 1.0), ("nice", 0.6, 1.0),
    ("poor", -0.4, 0.6), ("best", 1.0, 0.3), ("worst", -1.0, 1.0),
    ("happy", 0.8, 1.0), ("sad", -0.5, 1.0), ("angry", -0.5, 0.9),
    ("glad", 0.5, 1.0), ("sorry", -0.5, 1.0), ("proud", 0.8, 0.7),
    ("ashamed", -0.6, 0.9), ("grateful", 0.6, 0.8), ("thankful", 0.6, 0.8),
    ("hopeful", 0.5, 0.8), ("hopeless", -0.8, 0.9), ("confident", 0.5, 0.8),
    ("anxious", -0.4, 0.9), ("worried", -0.4, 0.8), ("stressed", -0.5, 0.8),
    ("desperate", -0.7, 0.9), ("relieved", 0.4, 0.8), ("comfortable", 0.5, 0.7),
    ("uncomfortable", -0.5, 0.7), ("secure", 0.5, 0.6), ("insecure", -0.5, 0.7),
    ("stable", 0.4, 0.4), ("unstable", -0.4, 0.5), ("steady", 0.3, 0.4),
    ("reliable", 0.6, 0.5), ("unreliable", -0.6, 0.6), ("responsible", 0.5, 0.5),
    ("irresponsible", -0.6, 0.7), ("honest", 0.6, 0.6), ("dishonest", -0.7, 0.8),
    ("trustworthy", 0.7, 0.6), ("fair", 0.5, 0.6), ("unfair", -0.5, 0.7),
    ("easy", 0.4, 0.7), ("hard", -0.3, 0.5), ("difficult", -0.5, 0.7),
    ("simple", 0.3, 0.4), ("complicated", -0.3, 0.6), ("smooth", 0.4, 0.5),
    ("rough", -0.4, 0.6), ("tough", -0.4, 0.6), ("painful", -0.7, 0.8),
    ("painless", 0.4, 0.6), ("pleasant", 0.7, 0.8), ("unpleasant", -0.6, 0.8),
    ("wonderful", 1.0, 1.0), ("fantastic", 0.9, 0.9), ("perfect", 1.0, 1.0),
    ("imperfect", -0.4, 0.6), ("superb", 0.9, 0.9), ("mediocre", -0.3, 0.6),
    ("decent", 0.3, 0.5), ("solid", 0.4, 0.4), ("weak", -0.4, 0.6),
    ("strong", 0.5, 0.5), ("stronger", 0.5, 0.5), ("healthy", 0.5, 0.5),
    ("unhealthy", -0.5, 0.6), ("sick", -0.7, 0.8), ("ill", -0.6, 0.8),
    ("injured", -0.6, 0.7), ("hurt", -0.6, 0.8), ("broken", -0.5, 0.6),
    ("fixed", 0.2, 0.3), ("repaired", 0.2, 0.3), ("improved", 0.4, 0.4),
    ("improving", 0.4, 0.4), ("worse", -0.6, 0.7), ("worsening", -0.6, 0.7),
    ("better", 0.5, 0.5), ("fine", 0.4, 0.6), ("okay", 0.3, 0.6),
    ("alright", 0.3, 0.6), ("well", 0.4, 0.5), ("badly", -0.6, 0.7),
    ("wrong", -0.5, 0.6), ("right", 0.4, 0.5), ("correct", 0.4, 0.4),
    ("incorrect", -0.4, 0.5), ("mistake", -0.4, 0.5), ("error", -0.4, 0.4),
    ("problem", -0.4, 0.4), ("trouble", -0.5, 0.5), ("issue", -0.2, 0.3),
    ("crisis", -0.7, 0.6), ("emergency", -0.6, 0.5), ("disaster", -0.9, 0.8),
    ("accident", -0.5, 0.4), ("failure", -0.7, 0.6), ("fail", -0.6, 0.6),
    ("failed", -0.6, 0.6), ("success", 0.7, 0.5), ("successful", 0.8, 0.6),
    ("succeed", 0.6, 0.5), ("win", 0.6, 0.5), ("winning", 0.6, 0.5),
    ("lose", -0.5, 0.5), ("losing", -0.5, 0.5), ("lost", -0.5, 0.5),
    ("loss", -0.5, 0.4), ("gain", 0.4, 0.4), ("profit", 0.4, 0.3),
    ("profitable", 0.6, 0.5), ("unprofitable", -0.5, 0.5), ("debt", -0.3, 0.3),
    ("indebted", -0.4, 0.5), ("owe", -0.3, 0.4), ("afford", 0.2, 0.4),
    ("affordable", 0.4, 0.5), ("unaffordable", -0.5, 0.6), ("cheap", 0.1, 0.6),
    ("expensive", -0.3, 0.6), ("costly", -0.4, 0.6), ("free", 0.4, 0.6),
    ("rich", 0.5, 0.6), ("wealthy", 0.5, 0.5), ("broke", -0.6, 0.7),
    ("bankrupt", -0.8, 0.6), ("bankruptcy", -0.8, 0.6), ("foreclosure", -0.7, 0.5),
    ("default", -0.6, 0.4), ("delinquent", -0.6, 0.5), ("late", -0.3, 0.5),
    ("early", 0.2, 0.4), ("prompt", 0.4, 0.5), ("timely", 0.4, 0.5),
    ("overdue", -0.5, 0.5), ("behind", -0.3, 0.4), ("ahead", 0.3, 0.4),
    ("struggle", -0.5, 0.6), ("struggling", -0.5, 0.6), ("hardship", -0.6, 0.6),
    ("burden", -0.5, 0.5), ("relief", 0.4, 0.5), ("rescue", 0.3, 0.5),
    ("help", 0.3, 0.4), ("helpful", 0.5, 0.5), ("helpless", -0.6, 0.8),
    ("support", 0.3, 0.3), ("supportive", 0.5, 0.5), ("care", 0.3, 0.4),
    ("careful", 0.4, 0.5), ("careless", -0.5, 0.6), ("caring", 0.5, 0.6),
    ("love", 0.5, 0.6), ("loving", 0.6, 0.7), ("hate", -0.8, 0.9),
    ("hateful", -0.9, 0.9), ("like", 0.3, 0.5), ("dislike", -0.4, 0.6),
    ("enjoy", 0.5, 0.6), ("enjoyable", 0.6, 0.7), ("fun", 0.5, 0.7),
    ("boring", -0.5, 0.8), ("interesting", 0.5, 0.7), ("exciting", 0.6, 0.8),
    ("dull", -0.4, 0.7), ("bright", 0.5, 0.6), ("dark", -0.3, 0.5),
    ("clean", 0.4, 0.5), ("dirty", -0.5, 0.7), ("fresh", 0.4, 0.5),
    ("stale", -0.3, 0.5), ("new", 0.2, 0.3), ("old", -0.1, 0.3),
    ("young", 0.1, 0.3), ("modern", 0.3, 0.4), ("outdated", -0.3, 0.5),
    ("safe", 0.5, 0.5), ("unsafe", -0.6, 0.6), ("dangerous", -0.6, 0.7),
    ("risky", -0.5, 0.7), ("risk", -0.3, 0.4), ("cautious", 0.2, 0.5),
    ("reckless", -0.7, 0.8), ("wise", 0.6, 0.7), ("unwise", -0.5, 0.7),
    ("smart", 0.6, 0.7), ("clever", 0.5, 0.7), ("stupid", -0.8, 0.9),
    ("foolish", -0.6, 0.8), ("dumb", -0.7, 0.9), ("brilliant", 0.9, 0.9),
    ("genius", 0.8, 0.8), ("talented", 0.7, 0.7), ("skilled", 0.6, 0.6),
    ("incompetent", -0.7, 0.8), ("competent", 0.5, 0.6), ("capable", 0.5, 0.5),
    ("unable", -0.4, 0.5), ("able", 0.3, 0.4), ("possible", 0.2, 0.4),
    ("impossible", -0.5, 0.6), ("likely", 0.2, 0.6), ("unlikely", -0.2, 0.6),
    ("certain", 0.3, 0.6), ("uncertain", -0.3, 0.7), ("sure", 0.4, 0.7),
    ("unsure", -0.3, 0.7), ("doubt", -0.3, 0.6), ("doubtful", -0.4, 0.7),
    ("believe", 0.2, 0.7), ("trust", 0.4, 0.5), ("distrust", -0.5, 0.6),
    ("faith", 0.4, 0.6), ("faithful", 0.6, 0.7), ("loyal", 0.6, 0.6),
    ("disloyal", -0.6, 0.7), ("true", 0.4, 0.5), ("false", -0.4, 0.5),
    ("real", 0.2, 0.4), ("fake", -0.5, 0.6), ("genuine", 0.5, 0.5),
    ("authentic", 0.5, 0.5), ("legitimate", 0.4, 0.4), ("fraud", -0.8, 0.7),
    ("fraudulent", -0.8, 0.8), ("scam", -0.8, 0.8), ("cheat", -0.7, 0.8),
    ("steal", -0.7, 0.7), ("stolen", -0.6, 0.6), ("crime", -0.6, 0.5),
    ("criminal", -0.7, 0.7), ("legal", 0.2, 0.3), ("illegal", -0.6, 0.6),
    ("lawful", 0.3, 0.4), ("unlawful", -0.5, 0.6), ("guilty", -0.6, 0.7),
    ("innocent", 0.4, 0.6), ("punish", -0.5, 0.6), ("reward", 0.5, 0.5),
    ("rewarding", 0.6, 0.6), ("generous", 0.6, 0.7), ("greedy", -0.7, 0.8),
    ("selfish", -0.7, 0.8), ("selfless", 0.6, 0.7), ("kind", 0.6, 0.9),
    ("unkind", -0.6, 0.8), ("cruel", -0.8, 0.9), ("gentle", 0.5, 0.7),
    ("harsh", -0.5, 0.7), ("mean", -0.5, 0.7), ("rude", -0.6, 0.8),
    ("polite", 0.5, 0.7), ("friendly", 0.6, 0.8), ("unfriendly", -0.5, 0.8),
    ("hostile", -0.7, 0.8), ("welcoming", 0.5, 0.7), ("warm", 0.5, 0.6),
    ("cold", -0.3, 0.5), ("hot", 0.1, 0.6), ("cool", 0.3, 0.6),
    ("calm", 0.3, 0.6), ("peaceful", 0.5, 0.7), ("violent", -0.8, 0.8),
    ("chaos", -0.6, 0.6), ("chaotic", -0.6, 0.7), ("organized", 0.4, 0.5),
    ("disorganized", -0.4, 0.6), ("neat", 0.4, 0.6), ("messy", -0.4, 0.7),
    ("tidy", 0.4, 0.6), ("beautiful", 0.85, 1.0), ("ugly", -0.7, 0.9),
    ("pretty", 0.5, 0.7), ("handsome", 0.5, 0.7), ("attractive", 0.5, 0.7),
    ("unattractive", -0.5, 0.7), ("gorgeous", 0.8, 0.9), ("lovely", 0.7, 0.8),
    ("charming", 0.6, 0.8), ("disgusting", -0.9, 0.9), ("gross", -0.7, 0.8),
    ("nasty", -0.7, 0.8), ("filthy", -0.7, 0.8), ("pure", 0.5, 0.6),
    ("impure", -0.4, 0.6), ("noble", 0.6, 0.7), ("humble", 0.4, 0.6),
    ("arrogant", -0.6, 0.8), ("modest", 0.4, 0.6), ("vain", -0.5, 0.7),
    ("brave", 0.6, 0.7), ("courageous", 0.7, 0.7), ("coward", -0.6, 0.8),
    ("fear", -0.5, 0.7), ("fearful", -0.6, 0.8), ("fearless", 0.5, 0.7),
    ("afraid", -0.5, 0.8), ("scared", -0.6, 0.8), ("terrified", -0.8, 0.9),
    ("panic", -0.7, 0.8), ("shock", -0.4, 0.6), ("shocking", -0.5, 0.8),
    ("surprise", 0.2, 0.6), ("surprising", 0.2, 0.7), ("amazed", 0.6, 0.9),
    ("astonishing", 0.5, 0.8), ("impressive", 0.7, 0.8), ("impressed", 0.6, 0.8),
    ("disappointing", -0.6, 0.8), ("disappointed", -0.6, 0.8),
    ("satisfying", 0.5, 0.7), ("satisfied", 0.5, 0.7), ("unsatisfied", -0.5, 0.7),
    ("content", 0.4, 0.6), ("discontent", -0.4, 0.6), ("pleased", 0.6, 0.8),
    ("displeased", -0.6, 0.8), ("delighted", 0.8, 0.9), ("thrilled", 0.8, 0.9),
    ("miserable", -0.8, 0.9), ("depressed", -0.7, 0.9), ("depressing", -0.7, 0.9),
    ("cheerful", 0.7, 0.8), ("joyful", 0.8, 0.8), ("joy", 0.7, 0.7),
    ("sorrow", -0.6, 0.8), ("grief", -0.7, 0.8), ("mourning", -0.6, 0.7),
    ("celebrate", 0.6, 0.6), ("celebration", 0.6, 0.6), ("blessing", 0.7, 0.7),
    ("blessed", 0.7, 0.8), ("bless", 0.6, 0.7), ("curse", -0.6, 0.7),
    ("cursed", -0.6, 0.7), ("lucky", 0.6, 0.8), ("unlucky", -0.5, 0.8),
    ("fortune", 0.5, 0.5), ("fortunate", 0.6, 0.7), ("unfortunate", -0.5, 0.7),
    ("misfortune", -0.6, 0.6), ("hope", 0.4, 0.6), ("despair", -0.8, 0.8),
    ("optimistic", 0.6, 0.8), ("pessimistic", -0.5, 0.8), ("positive", 0.5, 0.6),
    ("negative", -0.5, 0.6), ("neutral", 0.0, 0.3), ("important", 0.3, 0.5),
    ("unimportant", -0.3, 0.5), ("significant", 0.3, 0.5),
    ("insignificant", -0.3, 0.5), ("valuable", 0.5, 0.5), ("worthless", -0.7, 0.7),
    ("worthy", 0.5, 0.5), ("unworthy", -0.5, 0.6), ("useful", 0.4, 0.4),
    ("useless", -0.6, 0.7), ("effective", 0.5, 0.5), ("ineffective", -0.4, 0.5),
    ("efficient", 0.5, 0.5), ("inefficient", -0.4, 0.5), ("productive", 0.5, 0.5),
    ("unproductive", -0.4, 0.5), ("busy", 0.1, 0.4), ("lazy", -0.5, 0.7),
    ("hardworking", 0.6, 0.6), ("diligent", 0.5, 0.6), ("dedicated", 0.5, 0.5),
    ("committed", 0.4, 0.5), ("motivated", 0.5, 0.6), ("unmotivated", -0.4, 0.6),
    ("ambitious", 0.4, 0.6), ("determined", 0.4, 0.5), ("persistent", 0.3, 0.5),
    ("patient", 0.4, 0.6), ("impatient", -0.4, 0.6), ("eager", 0.4, 0.7),
    ("reluctant", -0.3, 0.6), ("willing", 0.3, 0.5), ("unwilling", -0.3, 0.5),
    ("ready", 0.3, 0.5), ("unprepared", -0.4, 0.5), ("prepared", 0.3, 0.4),
    ("qualified", 0.4, 0.4), ("unqualified", -0.4, 0.5), ("experienced", 0.4, 0.4),
    ("inexperienced", -0.3, 0.5), ("professional", 0.4, 0.4),
    ("unprofessional", -0.5, 0.6), ("expert", 0.5, 0.5), ("amateur", -0.2, 0.5),
    ("quality", 0.3, 0.4), ("superior", 0.6, 0.6), ("inferior", -0.5, 0.6),
    ("premium", 0.4, 0.5), ("luxury", 0.4, 0.5), ("comfort", 0.4, 0.5),
    ("discomfort", -0.4, 0.5), ("convenient", 0.4, 0.5), ("inconvenient", -0.4, 0.6),
    ("accessible", 0.3, 0.4), ("inaccessible", -0.3, 0.5), ("available", 0.2, 0.3),
    ("unavailable", -0.3, 0.4), ("flexible", 0.4, 0.5), ("inflexible", -0.3, 0.5),
    ("rigid", -0.3, 0.5), ("open", 0.2, 0.4), ("closed", -0.2, 0.4),
    ("honor", 0.5, 0.5), ("dishonor", -0.6, 0.6), ("respect", 0.5, 0.5),
    ("disrespect", -0.6, 0.6), ("admire", 0.6, 0.7), ("despise", -0.8, 0.8),
    ("appreciate", 0.5, 0.6), ("appreciated", 0.5, 0.6), ("neglect", -0.5, 0.6),
    ("neglected", -0.5, 0.6), ("abandon", -0.6, 0.6), ("abandoned", -0.6, 0.6),
    ("betray", -0.8, 0.8), ("betrayed", -0.8, 0.8), ("forgive", 0.4, 0.6),
    ("forgiven", 0.4, 0.6), ("blame", -0.4, 0.6), ("blamed", -0.4, 0.6),
    ("praise", 0.6, 0.6), ("praised", 0.6, 0.6), ("criticize", -0.4, 0.6),
    ("criticized", -0.4, 0.6), ("complain", -0.4, 0.6), ("complaint", -0.4, 0.5),
    ("apologize", -0.1, 0.5), ("apology", -0.1, 0.5), ("thank", 0.5, 0.5),
    ("thanks", 0.5, 0.5), ("welcome", 0.4, 0.5), ("congratulations", 0.7, 0.7),
    ("bonus", 0.5, 0.5), ("penalty", -0.5, 0.5), ("fee", -0.2, 0.3),
    ("fine", 0.4, 0.6), ("charge", -0.1, 0.2), ("refund", 0.3, 0.4),
    ("discount", 0.3, 0.4), ("save", 0.3, 0.4), ("savings", 0.3, 0.4),
    ("waste", -0.5, 0.6), ("wasted", -0.5, 0.6), ("spend", -0.1, 0.3),
    ("invest", 0.2, 0.3), ("investment", 0.2, 0.3), ("grow", 0.3, 0.4),
    ("growing", 0.3, 0.4), ("growth", 0.3, 0.4), ("shrink", -0.3, 0.4),
    ("decline", -0.4, 0.4), ("declining", -0.4, 0.5), ("collapse", -0.7, 0.6),
    ("recover", 0.3, 0.4), ("recovery", 0.3, 0.4), ("rebuild", 0.3, 0.4),
    ("destroy", -0.7, 0.7), ("destroyed", -0.7, 0.7), ("damage", -0.5, 0.5),
    ("damaged", -0.5, 0.5), ("ruin", -0.7, 0.7), ("ruined", -0.7, 0.7),
    ("protect", 0.4, 0.4), ("protected", 0.4, 0.4), ("threaten", -0.6, 0.6),
    ("threatened", -0.6, 0.6), ("threat", -0.6, 0.5), ("promise", 0.3, 0.5),
    ("promising", 0.5, 0.6), ("guarantee", 0.4, 0.5), ("guaranteed", 0.4, 0.5),
    ("assure", 0.3, 0.5), ("assured", 0.3, 0.5), ("doubtless", 0.3, 0.6),
    ("clear", 0.3, 0.4), ("unclear", -0.3, 0.5), ("obvious", 0.2, 0.5),
    ("confusing", -0.4, 0.7), ("confused", -0.4, 0.7), ("sensible", 0.4, 0.6),
    ("reasonable", 0.4, 0.6), ("unreasonable", -0.5, 0.7), ("rational", 0.3, 0.5),
    ("irrational", -0.4, 0.6), ("logical", 0.3, 0.4), ("illogical", -0.4, 0.6),
    ("practical", 0.3, 0.5), ("impractical", -0.3, 0.6), ("realistic", 0.3, 0.5),
    ("unrealistic", -0.4, 0.6), ("ideal", 0.6, 0.7), ("flawed", -0.4, 0.6),
    ("flawless", 0.7, 0.8), ("adequate", 0.2, 0.4), ("inadequate", -0.4, 0.5),
    ("sufficient", 0.2, 0.4), ("insufficient", -0.4, 0.5), ("abundant", 0.4, 0.5),
    ("scarce", -0.3, 0.5), ("plenty", 0.3, 0.5), ("lack", -0.4, 0.4),
    ("lacking", -0.4, 0.5), ("missing", -0.3, 0.4), ("complete", 0.2, 0.4),
    ("incomplete", -0.3, 0.4), ("finished", 0.2, 0.4), ("unfinished", -0.3, 0.4),
    ("urgent", -0.3, 0.6), ("critical", -0.3, 0.6), ("severe", -0.5, 0.6),
    ("mild", 0.1, 0.5), ("moderate", 0.1, 0.4), ("extreme", -0.2, 0.6),
    ("intense", -0.1, 0.6), ("slight", 0.0, 0.4), ("major", -0.1, 0.4),
    ("minor", 0.0, 0.4), ("huge", 0.1, 0.7), ("tiny", 0.0, 0.6),
    ("massive", 0.1, 0.7), ("enormous", 0.1, 0.7),
]

_VOWELS = "aeiou"


def variants(word):
    out = []
    if word.endswith(("s", "x", "z", "ch", "sh")):
        out.append(word + "es")
    elif word.endswith("y") and len(word) > 2 and word[-2] not in _VOWELS:
        out.append(word[:-1] + "ies")
    else:
        out.append(word + "s")
    if word.endswith("e"):
        out.append(word + "d")
        out.append(word[:-1] + "ing")
    elif word.endswith("y") and len(word) > 2 and word[-2] not in _VOWELS:
        out.append(word[:-1] + "ied")
        out.append(word + "ing")
    else:
        out.append(word + "ed")
        out.append(word + "ing")
    if word.endswith("y") and len(word) > 2 and word[-2] not in _VOWELS:
        out.append(word[:-1] + "ily")
    elif not word.endswith("ly"):
        out.append(word + "ly")
    if len(word) <= 7:
        if word.endswith("e"):
            out.extend([word + "r", word + "st"])
        elif word.endswith("y") and len(word) > 2 and word[-2] not in _VOWELS:
            out.extend([word[:-1] + "ier", word[:-1] + "iest"])
        else:
            out.extend([word + "er", word + "est"])
    return out


def main():
    entries = {}
    for word, pol, subj in BASE:
        entries.setdefault(word, (pol, subj))
    for word, pol, subj in BASE:
        for v in variants(word):
            entries.setdefault(v, (pol, subj))
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "loanscore" / "resources" / "lexicon.tsv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(entries):
            pol, subj = entries[word]
            fh.write(f"{word}\t{pol}\t{subj}\n")
    print(f"wrote {len(entries)} entries to {out}")


if __name__ == "__main__":
    main()
