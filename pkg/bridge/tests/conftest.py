"""A minimal in-memory stand-in for Blender's bpy module.

The fake records every call the replayer makes (bones created, keyframes
inserted, operators invoked) so tests can assert the exact scene Blender
would have been asked to build, without a Blender install.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from types import SimpleNamespace

import pytest

DATA_DIR = Path(__file__).parent / "data"
SAMPLE_DOC = DATA_DIR / "sample_anim.json"

UNIT_CUBE = [
    (x, y, z) for x in (-0.5, 0.5) for y in (-0.5, 0.5) for z in (-0.5, 0.5)
]


class FakeEditBone:
    def __init__(self, name):
        self.name = name
        self.head = (0.0, 0.0, 0.0)
        self.tail = (0.0, 0.0, 0.0)
        self.parent = None
        self.use_connect = False


class FakeEditBones:
    def __init__(self):
        self._bones = []

    def new(self, name):
        bone = FakeEditBone(name)
        self._bones.append(bone)
        return bone

    def __iter__(self):
        return iter(self._bones)

    def __len__(self):
        return len(self._bones)


class FakeArmatureData:
    def __init__(self, name):
        self.name = name
        self.edit_bones = FakeEditBones()


class FakePoseBone:
    def __init__(self, name, owner, log):
        self.name = name
        self.rotation_mode = "QUATERNION"
        self.rotation_euler = (0.0, 0.0, 0.0)
        self._owner = owner
        self._log = log

    def keyframe_insert(self, data_path, frame):
        self._log.append(
            (self._owner, self.name, data_path, frame, tuple(self.rotation_euler))
        )


class FakeObject:
    def __init__(self, name, data, obj_type, log):
        self.name = name
        self.data = data
        self.type = obj_type
        self.location = (0.0, 0.0, 0.0)
        self.scale = (1.0, 1.0, 1.0)
        self.bound_box = list(UNIT_CUBE)
        self.parent = None
        self.selected = False
        self._log = log
        self._pose = None

    def select_set(self, flag):
        self.selected = flag

    def keyframe_insert(self, data_path, frame):
        self._log.append((self.name, None, data_path, frame, tuple(self.location)))

    @property
    def pose(self):
        if self._pose is None:
            bones = {
                eb.name: FakePoseBone(eb.name, self.name, self._log)
                for eb in self.data.edit_bones
            }
            self._pose = SimpleNamespace(bones=bones)
        return self._pose


class FakeBpy:
    """Just enough of bpy for the replayer; every mutation is recorded."""

    def __init__(self):
        self.key_log = []  # (object, bone or None, data_path, frame, value)
        self.op_log = []  # (operator, kwargs)
        self.objects = []
        # What the import operators pretend the mesh file contained.
        self.mesh_spec = {"bound_box": list(UNIT_CUBE), "scale": (1.0, 1.0, 1.0)}

        scene = SimpleNamespace(
            frame_start=None,
            frame_end=None,
            render=SimpleNamespace(
                fps=None,
                filepath=None,
                image_settings=SimpleNamespace(file_format=None),
                ffmpeg=SimpleNamespace(format=None),
            ),
        )
        self.context = SimpleNamespace(
            collection=SimpleNamespace(objects=SimpleNamespace(link=self._link)),
            view_layer=SimpleNamespace(objects=SimpleNamespace(active=None)),
            scene=scene,
        )
        self.data = SimpleNamespace(
            armatures=SimpleNamespace(new=self._new_armature),
            objects=_ObjectStore(self),
        )
        self.ops = SimpleNamespace(
            object=SimpleNamespace(
                mode_set=self._op("object.mode_set"),
                parent_set=self._parent_set,
            ),
            wm=SimpleNamespace(
                save_as_mainfile=self._op("wm.save_as_mainfile"),
                obj_import=self._importer("wm.obj_import"),
            ),
            import_scene=SimpleNamespace(gltf=self._importer("import_scene.gltf")),
            render=SimpleNamespace(render=self._op("render.render")),
        )

    def _op(self, name):
        def call(**kwargs):
            self.op_log.append((name, kwargs))

        return call

    def _link(self, obj):
        if obj not in self.objects:
            self.objects.append(obj)

    def _new_armature(self, name):
        return FakeArmatureData(name)

    def new_object(self, name, data, obj_type):
        return FakeObject(name, data, obj_type, self.key_log)

    def _importer(self, op_name):
        def call(filepath):
            self.op_log.append((op_name, {"filepath": filepath}))
            mesh = self.new_object(Path(filepath).stem, None, "MESH")
            mesh.bound_box = list(self.mesh_spec["bound_box"])
            mesh.scale = tuple(self.mesh_spec["scale"])
            self.objects.append(mesh)

        return call

    def _parent_set(self, type):
        self.op_log.append(("object.parent_set", {"type": type}))
        active = self.context.view_layer.objects.active
        for obj in self.objects:
            if obj.selected and obj is not active:
                obj.parent = active

    def ops_named(self, name):
        return [kwargs for op, kwargs in self.op_log if op == name]


class _ObjectStore:
    def __init__(self, fake):
        self._fake = fake

    def new(self, name, data):
        return self._fake.new_object(name, data, "ARMATURE")

    def __iter__(self):
        return iter(list(self._fake.objects))


@pytest.fixture
def make_fake_bpy(monkeypatch):
    """Factory installing a fresh fake host; returns the fake each time."""

    def install():
        fake = FakeBpy()
        monkeypatch.setitem(sys.modules, "bpy", fake)
        return fake

    return install


@pytest.fixture
def fake_bpy(make_fake_bpy):
    return make_fake_bpy()


@pytest.fixture
def no_bpy(monkeypatch):
    monkeypatch.delitem(sys.modules, "bpy", raising=False)


@pytest.fixture
def sample_doc_dict():
    return json.loads(SAMPLE_DOC.read_text(encoding="utf-8"))
