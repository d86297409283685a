import json

import pytest

from phonotale.errors import InsufficientWords, OutOfVocabulary, TemplateNotFound
from phonotale.lexicon import to_ipa
from phonotale.story import (
    Blank,
    GenerationSpec,
    Scene,
    StoryConfig,
    Turn,
    dump_story,
    generate_story_from_template,
    load_story,
    marked_words,
    story_from_dict,
    story_to_dict,
    strip_markup,
    validate_story,
)

from conftest import DATA

LR_WORDS = ("lake", "lion", "river", "rocket")


def test_markup_helpers():
    line = "A [[rabbit]] runs to the [[lake]]."
    assert marked_words(line) == ["rabbit", "lake"]
    assert strip_markup(line) == "A rabbit runs to the lake."


def test_golden_story_is_valid(golden_story, lexicon):
    assert validate_story(golden_story, lexicon) == []


def test_validate_flags_undeclared_blank_word(golden_story, lexicon):
    scene = golden_story.scenes[0]
    bad_turn = Turn(
        turn_id="s1t1",
        character_line=scene.turns[0].character_line,
        expected_response="I see the {0}!",
        parent_tip="tip",
        blanks=(Blank(0, ("dog",)),),
    )
    bad = StoryConfig(
        **{
            **golden_story.__dict__,
            "scenes": (Scene(scene.scene_id, scene.image_ref, (bad_turn,) + scene.turns[1:], scene.choice),)
            + golden_story.scenes[1:],
        }
    )
    codes = [v.code for v in validate_story(bad, lexicon)]
    assert "UndeclaredBlankWord" in codes


def test_validate_flags_dangling_choice_target(golden_story, lexicon):
    doc = story_to_dict(golden_story)
    doc["scenes"][0]["choice"]["options"][0]["next_scene_id"] = "s9"
    codes = [v.code for v in validate_story(story_from_dict(doc), lexicon)]
    assert "DanglingChoiceTarget" in codes


def test_validate_flags_missing_tip_and_blank(golden_story, lexicon):
    doc = story_to_dict(golden_story)
    doc["scenes"][0]["turns"][0]["parent_tip"] = "  "
    doc["scenes"][0]["turns"][1]["blanks"] = []
    codes = [v.code for v in validate_story(story_from_dict(doc), lexicon)]
    assert "EmptyParentTip" in codes
    assert "MissingBlank" in codes


def test_validate_flags_word_problems(golden_story, lexicon):
    doc = story_to_dict(golden_story)
    doc["target_words"] = list(doc["target_words"]) + ["zzxqv", "sun"]
    codes = [v.code for v in validate_story(story_from_dict(doc), lexicon)]
    assert "TargetWordNotInLexicon" in codes       # zzxqv
    assert "TargetWordMissingPhoneme" in codes     # sun has no /r/ or /l/
    assert "TargetWordNeverPracticed" in codes


def test_validate_flags_cycle(lexicon):
    doc = json.loads((DATA / "golden_story.json").read_text(encoding="utf-8"))
    doc["scenes"][1]["choice"] = {
        "prompt": "loop?",
        "options": [
            {"option_id": "back", "label": "back", "next_scene_id": "s1"},
            {"option_id": "again", "label": "again", "next_scene_id": "s2"},
        ],
    }
    codes = [v.code for v in validate_story(story_from_dict(doc), lexicon)]
    assert "ChoiceCycle" in codes


def test_serialization_roundtrip(golden_story):
    assert story_from_dict(story_to_dict(golden_story)) == golden_story
    assert load_story(dump_story(golden_story)) == golden_story


def test_unknown_fields_are_tolerated(golden_story):
    doc = story_to_dict(golden_story)
    doc["future_field"] = {"x": 1}
    doc["scenes"][0]["new_thing"] = True
    doc["scenes"][0]["turns"][0]["animation"] = "wave"
    assert story_from_dict(doc) == golden_story


def test_generate_journey_story(lexicon):
    spec = GenerationSpec(("l", "r"), LR_WORDS, "journey", seed=7)
    story = generate_story_from_template(spec, lexicon)
    assert validate_story(story, lexicon) == []
    assert story.target_words == LR_WORDS
    assert len(story.scenes) == 2
    assert story.scenes[0].choice is not None


def test_generate_is_deterministic(lexicon):
    spec = GenerationSpec(("l", "r"), LR_WORDS, "journey", seed=7)
    a = dump_story(generate_story_from_template(spec, lexicon))
    b = dump_story(generate_story_from_template(spec, lexicon))
    assert a == b
    different_seed = GenerationSpec(("l", "r"), LR_WORDS, "journey", seed=8)
    assert dump_story(generate_story_from_template(different_seed, lexicon)) != a


def test_generated_bombardment_floor(lexicon):
    # every scene's dialogue voices each target phoneme at least twice,
    # counted independently via dictionary lookups
    spec = GenerationSpec(("l", "r"), LR_WORDS, "journey", seed=7)
    story = generate_story_from_template(spec, lexicon)
    for scene in story.scenes:
        for phoneme in story.target_phonemes:
            total = 0
            for turn in scene.turns:
                for token in strip_markup(turn.character_line).lower().split():
                    token = "".join(ch for ch in token if ch.isalpha())
                    if token and token in lexicon:
                        total += to_ipa(token, lexicon).symbols().count(phoneme)
            assert total >= 2, (scene.scene_id, phoneme)


def test_generated_turns_have_blanks_and_tips(lexicon):
    story = generate_story_from_template(
        GenerationSpec(("s",), ("sun", "sea", "sock", "soup"), "treasure_hunt", seed=3), lexicon
    )
    assert validate_story(story, lexicon) == []
    for scene in story.scenes:
        for turn in scene.turns:
            assert turn.blanks and turn.parent_tip
            assert turn.bombardment_count >= 1


def test_generate_unknown_template(lexicon):
    with pytest.raises(TemplateNotFound):
        generate_story_from_template(GenerationSpec(("r",), LR_WORDS, "mystery", 0), lexicon)


def test_generate_insufficient_words(lexicon):
    with pytest.raises(InsufficientWords):
        generate_story_from_template(GenerationSpec(("r",), ("river",), "journey", 0), lexicon)


def test_generate_rejects_oov_word(lexicon):
    with pytest.raises(OutOfVocabulary):
        generate_story_from_template(
            GenerationSpec(("r",), ("river", "rocket", "rain", "zzxqv"), "journey", 0), lexicon
        )


def test_generate_rejects_phoneme_with_no_words(lexicon):
    with pytest.raises(ValueError):
        generate_story_from_template(
            GenerationSpec(("k", "r"), ("river", "red", "rain", "rose"), "journey", 0), lexicon
        )
