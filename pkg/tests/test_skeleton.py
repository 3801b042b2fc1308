import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgt import poses, skeleton
from sgt.errors import DegeneratePose, EmptyDataset
from sgt.skeleton import MotionSequence, SkeletonSpec

from .conftest import random_motion


def test_spec_is_a_tree_over_all_joints(skel):
    assert len(skel.joints) == 10
    assert len(skel.bones) == 9
    # every joint reachable, every bone length positive
    assert np.all(skel.bone_lengths > 0)


def test_zero_length_skeleton_rejected():
    lengths = np.array(skeleton.DEFAULT_BONE_LENGTHS)
    lengths[3] = 0.0
    with pytest.raises(ValueError):
        SkeletonSpec(bone_lengths=lengths)


def test_bad_tree_rejected():
    # r_wrist given two parents: no longer a tree
    bones = skeleton.BONES[:-1] + ((skeleton.NECK, skeleton.R_WRIST),)
    with pytest.raises(ValueError):
        SkeletonSpec(bones=bones)


def test_tpose_dirs_axis_aligned(skel):
    pose = poses.canonical_pose("point_right", skel)
    dirs = skeleton.to_dirvec(pose, skel)
    # right arm stretched along -x: shoulder->elbow and elbow->wrist
    assert np.allclose(dirs[5], [-1, 0, 0], atol=1e-12)
    assert np.allclose(dirs[7], [-1, 0, 0], atol=1e-12)


def test_vertical_neck_dir(skel):
    pose = poses.rest_pose(skel)
    dirs = skeleton.to_dirvec(pose, skel)
    assert np.allclose(dirs[0], [0, 1, 0])
    assert pose[skeleton.NECK, 1] == pytest.approx(skel.bone_lengths[0])


def test_all_vertical_dirs_stack(skel):
    dirs = np.tile([0.0, 1.0, 0.0], (9, 1))
    pose = skeleton.to_pose(dirs, skel)
    # children sit above their parents by the bone length
    for b, (parent, child) in enumerate(skel.bones):
        np.testing.assert_allclose(pose[child] - pose[parent], [0, skel.bone_lengths[b], 0])


def test_roundtrip_recovers_pose(skel):
    rng = np.random.default_rng(7)
    for _ in range(20):
        pose = random_motion(rng, 1)[0]
        measured = skeleton.bone_lengths_of(pose, skel)
        recovered = skeleton.to_pose(skeleton.to_dirvec(pose, skel), skel.with_bone_lengths(measured))
        assert np.abs(recovered - pose).max() < 1e-6


def test_degenerate_pose_raises(skel):
    pose = poses.rest_pose(skel)
    pose[skeleton.R_ELBOW] = pose[skeleton.R_SHOULDER]
    with pytest.raises(DegeneratePose):
        skeleton.to_dirvec(pose, skel)


def test_dirvecs_unit_norm_on_random_motion(skel):
    frames = random_motion(np.random.default_rng(3), 25)
    dirs = skeleton.to_dirvec(frames, skel)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=-1), 1.0, atol=1e-6)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_mirror_is_involution(seed):
    skel = SkeletonSpec()
    frames = random_motion(np.random.default_rng(seed), 4)
    assert np.array_equal(skeleton.mirror(skeleton.mirror(frames, skel), skel), frames)


def test_mirror_fixed_point_on_symmetric_pose(skel):
    pose = poses.canonical_pose("raise_both_hands", skel)[None]
    np.testing.assert_allclose(skeleton.mirror(pose, skel), pose, atol=1e-12)


def test_mirror_swaps_point_direction(skel):
    right = poses.canonical_pose("point_right", skel)
    mirrored = skeleton.mirror(right[None], skel)[0]
    left = poses.canonical_pose("point_left", skel)
    np.testing.assert_allclose(mirrored, left, atol=1e-12)


def test_mirror_preserves_length_and_returns_sequence(skel):
    seq = MotionSequence(random_motion(np.random.default_rng(1), 12))
    out = skeleton.mirror(seq, skel)
    assert isinstance(out, MotionSequence) and len(out) == 12


def test_mean_pose_constant_sequence(skel):
    pose = poses.canonical_pose("framing", skel)
    seq = MotionSequence(np.repeat(pose[None], 8, axis=0))
    np.testing.assert_allclose(skeleton.mean_pose([seq], skel), pose, atol=1e-12)


def test_mean_pose_two_constant_sequences(skel):
    p = poses.canonical_pose("point_left", skel)
    q = poses.canonical_pose("open_palm", skel)
    seqs = [MotionSequence(np.repeat(p[None], 5, axis=0)), MotionSequence(np.repeat(q[None], 5, axis=0))]
    np.testing.assert_allclose(skeleton.mean_pose(seqs, skel), (p + q) / 2, atol=1e-12)


def test_mean_pose_matches_bruteforce(skel):
    rng = np.random.default_rng(11)
    seqs = [MotionSequence(random_motion(rng, rng.integers(3, 9))) for _ in range(5)]
    # direct summation oracle
    total = np.zeros((10, 3))
    count = 0
    for s in seqs:
        for frame in s.frames:
            total += frame
            count += 1
    expected = total / count
    expected -= expected[skel.root]
    np.testing.assert_allclose(skeleton.mean_pose(seqs, skel), expected, atol=1e-9)


def test_mean_pose_empty_dataset(skel):
    with pytest.raises(EmptyDataset):
        skeleton.mean_pose([], skel)


def test_motion_json_roundtrip(skel, tmp_path):
    seq = MotionSequence(random_motion(np.random.default_rng(2), 6))
    path = tmp_path / "m.json"
    skeleton.save_motion(seq, path, skel)
    loaded = skeleton.load_motion(path)
    assert loaded.fps == 15
    np.testing.assert_allclose(loaded.frames, seq.frames)
