"""Keypoint detection and description: scale-space blobs and Hessian blobs.

Builds synthetic blob scenes, runs both detectors, and inspects the
fixed-length descriptors (128 values for the scale-space pipeline, 64 for
the Hessian/Haar pipeline) that feed the fused SVM methods.
"""

import numpy as np

from dmcnet.dataset import GrayImage
from dmcnet.features import sift_describe, sift_keypoints, surf_describe, surf_keypoints
from dmcnet.features.fusion import pack_keypoint_block


def blob_scene(centers, sigma=5.0, size=96, invert=False):
    yy, xx = np.mgrid[0:size, 0:size]
    img = np.zeros((size, size))
    for cy, cx in centers:
        img += 230.0 * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sigma**2))
    return GrayImage(255.0 - img if invert else img)


scene = blob_scene([(25, 25), (25, 70), (70, 25), (70, 70), (48, 48)])

kps = sift_keypoints(scene, k=10)
print(f"scale-space detector: {len(kps)} keypoints (top 10 by |response|)")
for kp in kps[:5]:
    print(f"  ({kp.x:5.1f},{kp.y:5.1f}) scale={kp.scale:4.2f} "
          f"orientation={kp.orientation:5.2f} response={kp.response:+.4f}")

desc = sift_describe(scene, kps[0])
print(f"descriptor: {len(desc)} values, L2 norm {np.linalg.norm(desc.values):.9f}")

dark = blob_scene([(30, 40), (60, 60)], sigma=4.0, invert=True)
skps = surf_keypoints(dark, k=10)
print(f"\nHessian blob detector: {len(skps)} keypoints")
for kp in skps[:5]:
    print(f"  ({kp.x:5.1f},{kp.y:5.1f}) scale={kp.scale:4.2f} score={kp.response:.5f}")

sdesc = surf_describe(dark, skps[0])
print(f"Haar descriptor: {len(sdesc)} values, L2 norm {np.linalg.norm(sdesc.values):.9f}")

# Models need fixed-length inputs: descriptors are stacked into a 10-slot
# block, zero-padded when fewer keypoints exist.
block = pack_keypoint_block([surf_describe(dark, kp) for kp in skps], 10, 64)
used = int(np.sum(np.abs(block.reshape(10, 64)).sum(axis=1) > 0))
print(f"\npacked block: {block.shape[0]} values, {used}/10 slots used, rest zero-padded")
