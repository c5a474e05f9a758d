"""Adaptive 2x2 Haar wavelet image codec.

Four piecewise-constant wavelet banks, per-block or whole-matrix adaptive
basis selection, multilevel subband decomposition, uniform quantization,
canonical Huffman coding, and a bit-exact ``.ahc`` container format.
"""

from .codec import (
    BASIS_CHOICES,
    CodecParams,
    ImageBuffer,
    Metrics,
    compute_metrics,
    decode_from_bytes,
    decode_image,
    encode_image,
    encode_to_bytes,
    image_from_array,
    load_image,
    metrics_lines,
    parse_basis_choice,
    roundtrip_unquantized,
    save_image,
)
from .container import ChannelStream, CompressedImage
from .entropy import CodeTable, build_code
from .errors import (
    BadMagicError,
    ConstructionError,
    ContainerError,
    CorruptStreamError,
    DegenerateParameterError,
    FormatError,
    HaarCodecError,
    ParameterError,
    TruncatedStreamError,
    UnsupportedVersionError,
)
from .filterbank import (
    BUILTIN_IDS,
    AngleParams,
    Family1Params,
    ValidationReport,
    WaveletBasis,
    angle_rows,
    basis_from_angles,
    basis_from_family1,
    builtin_basis,
    builtin_tables,
    corollary_applicable,
    corollary_pattern_check,
    family1_rows,
    make_basis,
    modulation_matrix,
    unitarity_check,
    validate_orthogonality,
)
from .quantizer import QuantizerSpec, dequantize, quantize_subband
from .transform import (
    MODE_FIXED,
    MODE_GLOBAL,
    MODE_PER_BLOCK,
    BasisIdMap,
    BlockCoeffs,
    SubbandPyramid,
    SubbandSet,
    adaptive_block_forward,
    block_forward,
    block_inverse,
    pyramid_forward,
    pyramid_inverse,
    subband_forward,
    subband_inverse,
)

__version__ = "0.1.0"
