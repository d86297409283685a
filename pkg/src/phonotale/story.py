"""Story configurations: validation, serialization, and offline generation.

A story is an ordered list of scenes; each scene is an ordered list of
dialogue turns plus an optional branching choice. Character lines carry
inline ``[[word]]`` markup for target words so clients can highlight them;
expected responses are sentence templates whose ``{n}`` slots are madlib
blanks filled by the child's spoken word.

The template generator is a deterministic stand-in for generative story
authoring: the same inputs always produce a byte-identical story, and every
scene's dialogue repeats each target phoneme at least twice (auditory
bombardment). Live generated content would arrive through the same
StoryConfig shape.
"""
from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from .errors import InsufficientWords, OutOfVocabulary, TemplateNotFound
from .lexicon import Lexicon, to_ipa

MARKUP_RE = re.compile(r"\[\[([^\[\]]+)\]\]")
WORD_MODE = "word"
SENTENCE_MODE = "sentence"
MODES = (WORD_MODE, SENTENCE_MODE)

# ~8 minute sessions at a default 40s/turn budget
SECONDS_PER_TURN = 40


@dataclass(frozen=True)
class Blank:
    slot: int
    allowed_words: tuple[str, ...]


@dataclass(frozen=True)
class Turn:
    turn_id: str
    character_line: str
    expected_response: str
    parent_tip: str
    bombardment_count: int = 0
    blanks: tuple[Blank, ...] = ()


@dataclass(frozen=True)
class ChoiceOption:
    option_id: str
    label: str
    next_scene_id: str


@dataclass(frozen=True)
class Choice:
    prompt: str
    options: tuple[ChoiceOption, ...]


@dataclass(frozen=True)
class Scene:
    scene_id: str
    image_ref: str
    turns: tuple[Turn, ...]
    choice: Choice | None = None


@dataclass(frozen=True)
class StoryConfig:
    story_id: str
    title: str
    target_phonemes: tuple[str, ...]
    target_words: tuple[str, ...]
    mode_support: tuple[str, ...]
    scenes: tuple[Scene, ...]
    estimated_minutes: float = 8.0

    def scene(self, scene_id: str) -> Scene | None:
        for scene in self.scenes:
            if scene.scene_id == scene_id:
                return scene
        return None

    def turn(self, scene_id: str, turn_id: str) -> Turn | None:
        scene = self.scene(scene_id)
        if scene is None:
            return None
        for turn in scene.turns:
            if turn.turn_id == turn_id:
                return turn
        return None

    def supports(self, mode: str) -> bool:
        return mode in self.mode_support


def marked_words(text: str) -> list[str]:
    """Target words highlighted in a character line, in order."""
    return [m.group(1).lower() for m in MARKUP_RE.finditer(text)]


def strip_markup(text: str) -> str:
    return MARKUP_RE.sub(lambda m: m.group(1), text)


# --- validation -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: str = ""

    def __str__(self) -> str:
        where = f" [{self.where}]" if self.where else ""
        return f"{self.code}: {self.message}{where}"


def _phoneme_occurrences(word: str, phonemes: Iterable[str], lexicon: Lexicon) -> int:
    try:
        symbols = to_ipa(word, lexicon).symbols()
    except OutOfVocabulary:
        return 0
    targets = set(phonemes)
    return sum(1 for s in symbols if s in targets)


def validate_story(config: StoryConfig, lexicon: Lexicon) -> list[Violation]:
    """Check every structural invariant; an empty list means valid."""
    v: list[Violation] = []
    if not config.scenes:
        v.append(Violation("EmptyScenes", "story has no scenes", config.story_id))
    if not config.target_words:
        v.append(Violation("NoTargetWords", "story declares no target words", config.story_id))
    for mode in config.mode_support:
        if mode not in MODES:
            v.append(Violation("UnknownMode", f"unsupported mode {mode!r}", config.story_id))

    scene_ids = [s.scene_id for s in config.scenes]
    if len(set(scene_ids)) != len(scene_ids):
        v.append(Violation("DuplicateSceneId", "scene ids must be unique", config.story_id))

    for word in config.target_words:
        if word not in lexicon:
            v.append(Violation("TargetWordNotInLexicon", f"{word!r} has no pronunciation", word))
        elif _phoneme_occurrences(word, config.target_phonemes, lexicon) == 0:
            v.append(
                Violation(
                    "TargetWordMissingPhoneme",
                    f"{word!r} contains none of the target phonemes",
                    word,
                )
            )

    declared = set(config.target_words)
    practiced: set[str] = set()
    for scene in config.scenes:
        if not scene.turns:
            v.append(Violation("EmptyTurns", "scene has no turns", scene.scene_id))
        for turn in scene.turns:
            where = f"{scene.scene_id}/{turn.turn_id}"
            if not turn.parent_tip.strip():
                v.append(Violation("EmptyParentTip", "parent tip must be non-empty", where))
            if config.supports(WORD_MODE) and not turn.blanks:
                v.append(Violation("MissingBlank", "word-mode turn needs a blank", where))
            slots = [b.slot for b in turn.blanks]
            if len(set(slots)) != len(slots):
                v.append(Violation("DuplicateBlankSlot", "blank slots must be unique", where))
            for blank in turn.blanks:
                if not blank.allowed_words:
                    v.append(Violation("EmptyBlank", "blank allows no words", where))
                for word in blank.allowed_words:
                    if word not in declared:
                        v.append(
                            Violation(
                                "UndeclaredBlankWord",
                                f"blank word {word!r} is not a declared target word",
                                where,
                            )
                        )
                practiced.update(blank.allowed_words)
            practiced.update(w for w in marked_words(turn.character_line) if w in declared)
        if scene.choice is not None:
            where = f"{scene.scene_id}/choice"
            if len(scene.choice.options) < 2:
                v.append(Violation("TooFewChoiceOptions", "a choice needs >= 2 options", where))
            for option in scene.choice.options:
                if option.next_scene_id not in scene_ids:
                    v.append(
                        Violation(
                            "DanglingChoiceTarget",
                            f"option {option.option_id!r} targets missing scene "
                            f"{option.next_scene_id!r}",
                            where,
                        )
                    )

    for word in sorted(declared - practiced):
        v.append(
            Violation("TargetWordNeverPracticed", f"{word!r} appears in no turn", word)
        )

    v.extend(_check_graph(config, scene_ids))
    return v


def _successors(config: StoryConfig, index: int) -> list[str]:
    scene = config.scenes[index]
    if scene.choice is not None:
        return [o.next_scene_id for o in scene.choice.options if config.scene(o.next_scene_id)]
    if index + 1 < len(config.scenes):
        return [config.scenes[index + 1].scene_id]
    return []


def _check_graph(config: StoryConfig, scene_ids: list[str]) -> list[Violation]:
    if not config.scenes or len(set(scene_ids)) != len(scene_ids):
        return []
    index_of = {sid: i for i, sid in enumerate(scene_ids)}
    v: list[Violation] = []

    # cycle detection over choice/fall-through edges
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def visit(sid: str) -> bool:
        if state.get(sid) == 1:
            return False
        if state.get(sid) == 0:
            return True
        state[sid] = 0
        cyclic = any(visit(nxt) for nxt in _successors(config, index_of[sid]))
        state[sid] = 1
        return cyclic

    if any(visit(sid) for sid in scene_ids):
        v.append(Violation("ChoiceCycle", "story graph contains a cycle"))

    reachable = {scene_ids[0]}
    frontier = [scene_ids[0]]
    while frontier:
        sid = frontier.pop()
        for nxt in _successors(config, index_of[sid]):
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    for sid in scene_ids:
        if sid not in reachable:
            v.append(Violation("UnreachableScene", "scene cannot be reached", sid))
    return v


# --- serialization --------------------------------------------------------

def story_to_dict(config: StoryConfig) -> dict:
    return {
        "story_id": config.story_id,
        "title": config.title,
        "target_phonemes": list(config.target_phonemes),
        "target_words": list(config.target_words),
        "mode_support": list(config.mode_support),
        "estimated_minutes": config.estimated_minutes,
        "scenes": [
            {
                "scene_id": s.scene_id,
                "image_ref": s.image_ref,
                "turns": [
                    {
                        "turn_id": t.turn_id,
                        "character_line": t.character_line,
                        "expected_response": t.expected_response,
                        "parent_tip": t.parent_tip,
                        "bombardment_count": t.bombardment_count,
                        "blanks": [
                            {"slot": b.slot, "allowed_words": list(b.allowed_words)}
                            for b in t.blanks
                        ],
                    }
                    for t in s.turns
                ],
                "choice": None
                if s.choice is None
                else {
                    "prompt": s.choice.prompt,
                    "options": [
                        {
                            "option_id": o.option_id,
                            "label": o.label,
                            "next_scene_id": o.next_scene_id,
                        }
                        for o in s.choice.options
                    ],
                },
            }
            for s in config.scenes
        ],
    }


def story_from_dict(doc: dict) -> StoryConfig:
    """Build a StoryConfig from a parsed document; unknown fields are ignored."""
    scenes = []
    for s in doc.get("scenes", []):
        turns = tuple(
            Turn(
                turn_id=t["turn_id"],
                character_line=t["character_line"],
                expected_response=t.get("expected_response", ""),
                parent_tip=t.get("parent_tip", ""),
                bombardment_count=int(t.get("bombardment_count", 0)),
                blanks=tuple(
                    Blank(int(b["slot"]), tuple(b["allowed_words"]))
                    for b in t.get("blanks", [])
                ),
            )
            for t in s.get("turns", [])
        )
        choice = None
        if s.get("choice"):
            c = s["choice"]
            choice = Choice(
                prompt=c.get("prompt", ""),
                options=tuple(
                    ChoiceOption(o["option_id"], o.get("label", o["option_id"]), o["next_scene_id"])
                    for o in c.get("options", [])
                ),
            )
        scenes.append(Scene(s["scene_id"], s.get("image_ref", ""), turns, choice))
    return StoryConfig(
        story_id=doc["story_id"],
        title=doc.get("title", doc["story_id"]),
        target_phonemes=tuple(doc.get("target_phonemes", [])),
        target_words=tuple(doc.get("target_words", [])),
        mode_support=tuple(doc.get("mode_support", list(MODES))),
        scenes=tuple(scenes),
        estimated_minutes=float(doc.get("estimated_minutes", 8.0)),
    )


def dump_story(config: StoryConfig) -> str:
    return json.dumps(story_to_dict(config), ensure_ascii=False, indent=2) + "\n"


def load_story(text: str) -> StoryConfig:
    return story_from_dict(json.loads(text))


# --- deterministic template generation ------------------------------------

@dataclass(frozen=True)
class GenerationSpec:
    target_phonemes: tuple[str, ...]
    words: tuple[str, ...]
    template_id: str
    seed: int = 0


_TEMPLATES: dict | None = None

# Every scene's dialogue must voice each target phoneme at least this often.
BOMBARDMENT_MIN = 2


def story_templates() -> dict:
    global _TEMPLATES
    if _TEMPLATES is None:
        ref = resources.files("phonotale").joinpath("data/story_templates.json")
        _TEMPLATES = json.loads(ref.read_text(encoding="utf-8"))
    return _TEMPLATES


def _slot_count(scene_tpl: dict) -> int:
    return sum(len(re.findall(r"\{b\d+\}", t["line"])) for t in scene_tpl["turns"])


def generate_story_from_template(spec: GenerationSpec, lexicon: Lexicon) -> StoryConfig:
    """Fill a committed story template with the given target words.

    Deterministic: identical specs produce byte-identical stories. Dialogue
    slots are assigned so each scene voices every target phoneme at least
    BOMBARDMENT_MIN times, every word lands in at least one turn's blank,
    and madlib blanks rotate through all the words.
    """
    templates = story_templates()
    if spec.template_id not in templates:
        raise TemplateNotFound(spec.template_id)
    template = templates[spec.template_id]

    words = tuple(dict.fromkeys(w.lower() for w in spec.words))
    min_words = int(template["min_words"])
    if len(words) < min_words:
        raise InsufficientWords(min_words, len(words))
    n_turns = sum(len(s["turns"]) for s in template["scenes"])
    if len(words) > n_turns:
        raise ValueError(
            f"template {spec.template_id!r} has {n_turns} turns, cannot practice "
            f"{len(words)} words"
        )

    pools: dict[str, list[str]] = {}
    for phoneme in spec.target_phonemes:
        pool = [
            w for w in words
            if phoneme in to_ipa(w, lexicon).symbols()  # OutOfVocabulary propagates
        ]
        if not pool:
            raise ValueError(f"no given word contains target phoneme /{phoneme}/")
        pools[phoneme] = pool

    for scene_tpl in template["scenes"]:
        if _slot_count(scene_tpl) < BOMBARDMENT_MIN * len(spec.target_phonemes):
            raise ValueError(
                f"template {spec.template_id!r} cannot voice "
                f"{len(spec.target_phonemes)} phonemes {BOMBARDMENT_MIN}x per scene"
            )

    rng = random.Random(spec.seed)
    response_order = list(words)
    rng.shuffle(response_order)

    digest = hashlib.sha1(
        repr((spec.target_phonemes, words, spec.template_id, spec.seed)).encode()
    ).hexdigest()[:8]
    story_id = f"{spec.template_id}-{digest}"
    phoneme_list = " and ".join(f"/{p}/" for p in spec.target_phonemes)

    scenes: list[Scene] = []
    turn_index = 0
    targets = set(spec.target_phonemes)
    for s_idx, scene_tpl in enumerate(template["scenes"]):
        # two rotating picks per phoneme guarantee the bombardment floor
        fillers: list[str] = []
        for phoneme in spec.target_phonemes:
            pool = pools[phoneme]
            for j in range(BOMBARDMENT_MIN):
                fillers.append(pool[(BOMBARDMENT_MIN * s_idx + j) % len(pool)])
        extra = _slot_count(scene_tpl) - len(fillers)
        for j in range(extra):
            fillers.append(response_order[(s_idx * 3 + j) % len(response_order)])
        filler_iter = iter(fillers)

        turns: list[Turn] = []
        for t_idx, turn_tpl in enumerate(scene_tpl["turns"]):
            # templates wrap bombardment slots in [[...]] highlight markup
            line = turn_tpl["line"]
            for slot in re.findall(r"\{b\d+\}", line):
                line = line.replace(slot, next(filler_iter), 1)
            # cycling the shuffled word list over all turns reaches every
            # word at least once because len(words) <= n_turns
            response_word = response_order[turn_index % len(response_order)]
            turn_index += 1
            bombardment = sum(
                _phoneme_occurrences(tok, targets, lexicon)
                for tok in strip_markup(line).replace("!", " ").replace("?", " ")
                .replace(".", " ").replace(",", " ").lower().split()
            )
            turns.append(
                Turn(
                    turn_id=f"s{s_idx + 1}t{t_idx + 1}",
                    character_line=line,
                    expected_response=turn_tpl["response"],
                    parent_tip=turn_tpl["tip"].replace("{r}", response_word),
                    bombardment_count=bombardment,
                    blanks=(Blank(0, (response_word,)),),
                )
            )
        choice = None
        if scene_tpl.get("choice"):
            c = scene_tpl["choice"]
            choice = Choice(
                prompt=c["prompt"],
                options=tuple(
                    ChoiceOption(o["option_id"], o["label"], f"s{o['next_scene'] + 1}")
                    for o in c["options"]
                ),
            )
        scenes.append(
            Scene(
                scene_id=f"s{s_idx + 1}",
                image_ref=scene_tpl["image_ref"],
                turns=tuple(turns),
                choice=choice,
            )
        )

    return StoryConfig(
        story_id=story_id,
        title=template["title"].replace("{phonemes}", phoneme_list),
        target_phonemes=tuple(spec.target_phonemes),
        target_words=words,
        mode_support=MODES,
        scenes=tuple(scenes),
        estimated_minutes=round(n_turns * SECONDS_PER_TURN / 60, 1),
    )
