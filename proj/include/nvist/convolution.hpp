#pragma once

#include "nvist/fft.hpp"
#include "nvist/grid.hpp"

namespace nvist {

/// Index box on a lattice: rows [row0, row0 + rows), columns [col0, col0 + cols).
struct IndexBox {
  int row0 = 0, col0 = 0, rows = 0, cols = 0;
  int size() const { return rows * cols; }
  bool contains(int i, int j) const {
    return i >= row0 && i < row0 + rows && j >= col0 && j < col0 + cols;
  }
};

/// Aperiodic lattice convolution out(a) = sum_b K(a - b) in(b), in on `src`, out on `dst`,
/// evaluated by one zero-padded FFT product. K is sampled once at construction.
class LatticeConvolution {
 public:
  LatticeConvolution() = default;

  /// kernel(di, dj) returns K at the index displacement (di, dj).
  template <typename Kernel>
  LatticeConvolution(const IndexBox& src, const IndexBox& dst, Kernel&& kernel)
      : src_(src), dst_(dst) {
    const int rmin = dst.row0 - (src.row0 + src.rows - 1);
    const int cmin = dst.col0 - (src.col0 + src.cols - 1);
    prows_ = fft_friendly_size(src.rows + dst.rows - 1);
    pcols_ = fft_friendly_size(src.cols + dst.cols - 1);
    kernel_hat_ = ComplexArray::Zero(prows_, pcols_);
    for (int t = 0; t < src.rows + dst.rows - 1; ++t)
      for (int u = 0; u < src.cols + dst.cols - 1; ++u) kernel_hat_(t, u) = kernel(t + rmin, u + cmin);
    fft2(kernel_hat_);
  }

  const IndexBox& src() const { return src_; }
  const IndexBox& dst() const { return dst_; }

  /// in: src.rows x src.cols, out: dst.rows x dst.cols.
  void apply(const ComplexArray& in, ComplexArray& out) const {
    ComplexArray pad = ComplexArray::Zero(prows_, pcols_);
    pad.topLeftCorner(src_.rows, src_.cols) = in;
    fft2(pad);
    pad *= kernel_hat_;
    ifft2(pad);
    out = pad.block(src_.rows - 1, src_.cols - 1, dst_.rows, dst_.cols);
  }

 private:
  IndexBox src_, dst_;
  int prows_ = 0, pcols_ = 0;
  ComplexArray kernel_hat_;
};

/// Bounding box of samples with |f| > rel_tol * max|f|, grown by `margin` cells and clipped.
IndexBox support_box(const Field& f, double rel_tol, int margin = 1);

}  // namespace nvist
