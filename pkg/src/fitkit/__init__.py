"""Frequency-in-time signal and image toolkit."""

from .core import (Image, Kernel1D, Kernel2D, Signal, crop_image, crop_signal,
                   equalize, equalize_array, hadamard_quotient, pad_image,
                   pad_signal)
from .denoise import (SavGolFilter, ThresholdSpec, ds1d, ds2d, mad_sigma, mf1d,
                      mf2d, savgol_apply_1d, savgol_apply_2d, savgol_coeffs_1d,
                      savgol_filters_2d, threshold, universal_threshold,
                      wavelet_denoise)
from .edges import EdgeMap, canny, fit_edges, gradient_edges, to_gray
from .fit1d import (FitSeries, WitnessBars, fit_nonoverlap, fit_overlap,
                    phase_plane, witness_bars)
from .fit2d import (FitImage, directional_derivative, fit_image_nonoverlap,
                    fit_image_overlap, smoothing_denominator)
from .metrics import (Histogram, cr, entropy, histogram, joint_entropy, mae,
                      michelson_contrast, mse, mutual_information, psd, psnr,
                      pss)
from .multires import (Pyramid1D, Pyramid2D, SubbandSet1D, SubbandSet2D,
                       coslet1d_forward, coslet1d_inverse, coslet2d_forward,
                       coslet2d_inverse, dct2d, haar1d_forward, haar1d_inverse,
                       haar2d_forward, haar2d_inverse, idct2d, merge_levels,
                       split_levels)
from .qsa import (OmegaSeries, StateTrajectory, evolve, qsa_monotone,
                  qsa_multitone, schrodinger_step)
from .superres import (DeblurMask, GaConfig, SrPayload, deblur_1d, deblur_2d,
                       deblur_mask, default_deblur_mask, ga_tune_mask,
                       projection_coeff, res_upsample, sr_decode, sr_encode)
from .synth import SynthSpec, synth

__version__ = "0.1.0"
