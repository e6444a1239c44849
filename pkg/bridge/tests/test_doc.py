"""Validation behavior of the neutral document parser."""

import json

import pytest

from blender_bridge import DocError, load_doc
from conftest import SAMPLE_DOC


def minimal_doc():
    return {
        "schema_version": 1,
        "fps": 24,
        "frames_per_key": 10,
        "total_frames": 20,
        "armature": {
            "bones": [
                {"name": "base", "parent": None, "head": [0, 0, 0], "tail": [0, 0, 1]},
                {"name": "tip", "parent": "base", "head": [0, 0, 1], "tail": [0, 0, 2]},
            ],
            "placement": {"location": [0, 0, 0], "tau": [0, 0, 0]},
        },
        "tracks": [
            {
                "target": "tip",
                "channel": "rotation_euler",
                "keys": [[10, [0, 0, 0.5]], [20, [0, 0, 0]]],
            }
        ],
        "semantic": [[10, [0, 5]]],
    }


def write_doc(tmp_path, doc):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_sample_doc_loads(sample_doc_dict):
    doc = load_doc(SAMPLE_DOC)
    assert doc.fps == 24
    assert doc.frames_per_key == 10
    assert doc.total_frames == 80
    assert len(doc.armature.bones) == 17
    assert doc.armature.bones[0].name == "waist"
    assert doc.armature.bones[0].parent is None
    assert doc.armature.bone_names() == [
        b["name"] for b in sample_doc_dict["armature"]["bones"]
    ]
    assert doc.armature.placement.location == (0.0, 0.0, 1.0)
    assert len(doc.tracks) == len(sample_doc_dict["tracks"])


def test_minimal_doc_roundtrip(tmp_path):
    doc = load_doc(write_doc(tmp_path, minimal_doc()))
    assert doc.armature.bone_names() == ["base", "tip"]
    assert doc.tracks[0].keys == ((10, (0.0, 0.0, 0.5)), (20, (0.0, 0.0, 0.0)))
    assert doc.semantic == ((10, (0, 5)),)


def test_offset_is_tail_minus_head():
    doc = load_doc(SAMPLE_DOC)
    for bone in doc.armature.bones:
        assert bone.offset == tuple(t - h for t, h in zip(bone.tail, bone.head))


def test_missing_file(tmp_path):
    with pytest.raises(DocError, match="not found"):
        load_doc(tmp_path / "absent.json")


def test_invalid_json(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(DocError, match="invalid JSON"):
        load_doc(path)


def test_unsupported_schema(tmp_path):
    doc = minimal_doc()
    doc["schema_version"] = 2
    with pytest.raises(DocError, match="schema_version"):
        load_doc(write_doc(tmp_path, doc))


def test_duplicate_bone_name(tmp_path):
    doc = minimal_doc()
    doc["armature"]["bones"].append(dict(doc["armature"]["bones"][1]))
    with pytest.raises(DocError, match="duplicate"):
        load_doc(write_doc(tmp_path, doc))


def test_child_before_parent(tmp_path):
    doc = minimal_doc()
    doc["armature"]["bones"].reverse()
    with pytest.raises(DocError, match="unknown parent"):
        load_doc(write_doc(tmp_path, doc))


def test_no_bones(tmp_path):
    doc = minimal_doc()
    doc["armature"]["bones"] = []
    doc["tracks"] = []
    doc["total_frames"] = 0
    with pytest.raises(DocError, match="no bones"):
        load_doc(write_doc(tmp_path, doc))


def test_unknown_channel(tmp_path):
    doc = minimal_doc()
    doc["tracks"][0]["channel"] = "scale"
    with pytest.raises(DocError, match="channel"):
        load_doc(write_doc(tmp_path, doc))


def test_track_targets_unknown_bone(tmp_path):
    doc = minimal_doc()
    doc["tracks"][0]["target"] = "femur"
    with pytest.raises(DocError, match="unknown bone"):
        load_doc(write_doc(tmp_path, doc))


def test_keys_must_increase(tmp_path):
    doc = minimal_doc()
    doc["tracks"][0]["keys"] = [[20, [0, 0, 0]], [10, [0, 0, 0.5]]]
    with pytest.raises(DocError, match="increase"):
        load_doc(write_doc(tmp_path, doc))


def test_total_frames_must_match_last_key(tmp_path):
    doc = minimal_doc()
    doc["total_frames"] = 99
    with pytest.raises(DocError, match="total_frames"):
        load_doc(write_doc(tmp_path, doc))


def test_zero_fps_rejected(tmp_path):
    doc = minimal_doc()
    doc["fps"] = 0
    with pytest.raises(DocError, match="timing"):
        load_doc(write_doc(tmp_path, doc))


def test_malformed_head_triple(tmp_path):
    doc = minimal_doc()
    doc["armature"]["bones"][0]["head"] = [0, 0]
    with pytest.raises(DocError, match="triple"):
        load_doc(write_doc(tmp_path, doc))


def test_root_location_track_allowed(tmp_path):
    doc = minimal_doc()
    doc["tracks"].append(
        {"target": "root", "channel": "location", "keys": [[20, [0.25, 0, 0]]]}
    )
    loaded = load_doc(write_doc(tmp_path, doc))
    assert loaded.tracks[1].target == "root"
    assert loaded.tracks[1].keys == ((20, (0.25, 0.0, 0.0)),)
