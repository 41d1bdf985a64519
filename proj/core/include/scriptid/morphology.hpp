#pragma once

#include <optional>
#include <vector>

#include "scriptid/image.hpp"
#include "scriptid/imaging.hpp"

namespace scriptid {

struct Offset {
  int dr = 0;
  int dc = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Flat structuring element given as displacements from its centre. Line
/// elements additionally remember their direction and length, which lets the
/// morphology kernels use run-length scans instead of per-offset probing.
class StructuringElement {
 public:
  /// Arbitrary flat element; must contain the origin.
  explicit StructuringElement(std::vector<Offset> offsets);

  const std::vector<Offset>& offsets() const { return offsets_; }
  std::optional<int> direction() const { return direction_; }
  int length() const { return static_cast<int>(offsets_.size()); }
  bool is_line() const { return direction_.has_value(); }

  friend StructuringElement line_se(int direction_deg, int length);

 private:
  StructuringElement(std::vector<Offset> offsets, int direction);

  std::vector<Offset> offsets_;
  std::optional<int> direction_;
};

/// Centred digital line of `length` (odd, >= 1) pixels. Directions:
/// 0 horizontal, 90 vertical, 45 rising to the right, 135 rising to the left.
/// Diagonals take exactly one pixel per row.
StructuringElement line_se(int direction_deg, int length);

inline constexpr int kLineDirections[4] = {0, 45, 90, 135};

// Pixels outside the image are background for both erosion and dilation.
BinaryImage erode(const BinaryImage& img, const StructuringElement& se);
BinaryImage dilate(const BinaryImage& img, const StructuringElement& se);
BinaryImage open(const BinaryImage& img, const StructuringElement& se);

BinaryImage complement(const BinaryImage& img);

struct MarkerMaskPair {
  BinaryImage marker;
  BinaryImage mask;
};

/// Geodesic reconstruction by dilation: the union of the mask components
/// (under `conn`) that intersect the marker. Uses the hybrid
/// raster / anti-raster / FIFO propagation scheme, linear in the image size.
/// Throws std::invalid_argument on size mismatch or marker not inside mask.
BinaryImage reconstruct_by_dilation(const MarkerMaskPair& pair, Connectivity conn = Connectivity::Eight);
BinaryImage reconstruct_by_dilation(const BinaryImage& marker, const BinaryImage& mask,
                                    Connectivity conn = Connectivity::Eight);

/// Reconstruction of `img` from its erosion by `se`: every component that
/// survives the erosion comes back whole, the rest vanish.
BinaryImage opening_by_reconstruction(const BinaryImage& img, const StructuringElement& se);

/// Fills every background region that cannot reach the image border. The
/// background is reconstructed with 4-connectivity from the border frame, so
/// an 8-connected ink ring still encloses its interior.
BinaryImage fill_holes(const BinaryImage& img);

}  // namespace scriptid
