"""Classical image descriptors: Sobel/HOG, SIFT, integral images, SURF, fusion."""

from .hog import GradientField, HogDescriptor, hog_extract, sobel_gradients
from .integral import IntegralImage, box_sum, integral_image
from .keypoints import Keypoint
from .sift import SiftDescriptor, sift_describe, sift_keypoints
from .surf import SurfDescriptor, surf_describe, surf_keypoints
from .fusion import concat_features, read_descriptor_csv, write_descriptor_csv

__all__ = [
    "GradientField",
    "HogDescriptor",
    "IntegralImage",
    "Keypoint",
    "SiftDescriptor",
    "SurfDescriptor",
    "box_sum",
    "concat_features",
    "hog_extract",
    "integral_image",
    "read_descriptor_csv",
    "sift_describe",
    "sift_keypoints",
    "sobel_gradients",
    "surf_describe",
    "surf_keypoints",
    "write_descriptor_csv",
]
