// SPDX-License-Identifier: Apache-2.0
//
// wavekit - wavenumber-domain MIMO precoding and capacity simulation
// Copyright (C) 2026 The wavekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wavekit/wavenumber.hpp"
#include "wavekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wavekit
{
    WavenumberSupport::WavenumberSupport(std::vector<WavenumberIndex> indices, double beta, ArrayGeometry geom)
        : indices_(std::move(indices)), beta_(beta), geom_(std::move(geom))
    {
        if (indices_.empty())
            throw EmptySupport("wavenumber support is empty");
        if (!std::is_sorted(indices_.begin(), indices_.end()) ||
            std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
            throw InvalidArgument("wavenumber indices must be unique and sorted");
        const auto [lx_lo, lx_hi] = alias_free_range(geom_.n_x());
        const auto [ly_lo, ly_hi] = alias_free_range(geom_.n_y());
        for (const auto &i : indices_)
            if (i.l_x < lx_lo || i.l_x > lx_hi || i.l_y < ly_lo || i.l_y > ly_hi)
                throw InvalidArgument("wavenumber index outside the alias-free range");
    }

    std::ptrdiff_t WavenumberSupport::find(const WavenumberIndex &idx) const noexcept
    {
        const auto it = std::lower_bound(indices_.begin(), indices_.end(), idx);
        if (it == indices_.end() || *it != idx)
            return -1;
        return it - indices_.begin();
    }

    std::pair<int, int> alias_free_range(std::size_t n)
    {
        const int ni = static_cast<int>(n);
        // ceil(-n/2) and ceil(n/2) - 1 in integer arithmetic
        const int lo = -(ni / 2);
        const int hi = (ni + 1) / 2 - 1;
        return {lo, hi};
    }

    WavenumberSupport enumerate_support(const ArrayGeometry &geom, const SystemParams &params, double beta)
    {
        if (!(beta >= 1.0) || !std::isfinite(beta))
            throw InvalidArgument("beta must be >= 1");

        const double k = params.wavenumber_rad_per_m();
        const double bound = beta * k * k * (1.0 + 1e-12); // boundary points like |l| = n/2 at half-wavelength spacing
        const double fx = 2.0 * std::numbers::pi / geom.aperture_x_m();
        const double fy = 2.0 * std::numbers::pi / geom.aperture_y_m();

        const auto [lx_lo, lx_hi] = alias_free_range(geom.n_x());
        const auto [ly_lo, ly_hi] = alias_free_range(geom.n_y());

        std::vector<WavenumberIndex> idx;
        for (int lx = lx_lo; lx <= lx_hi; ++lx)
            for (int ly = ly_lo; ly <= ly_hi; ++ly)
            {
                const double kx = fx * lx;
                const double ky = fy * ly;
                if (kx * kx + ky * ky <= bound)
                    idx.push_back({lx, ly});
            }
        if (idx.empty())
            throw EmptySupport("no wavenumber index satisfies the support inequality");
        return WavenumberSupport(std::move(idx), beta, geom);
    }

    Dictionary::Dictionary(WavenumberSupport support) : support_(std::move(support))
    {
        const auto &g = support_.geom();
        const auto nx = static_cast<long long>(g.n_x());
        const auto ny = static_cast<long long>(g.n_y());
        const double amp = 1.0 / std::sqrt(static_cast<double>(nx * ny));
        const double two_pi = 2.0 * std::numbers::pi;

        matrix_.resize(nx * ny, static_cast<Eigen::Index>(support_.size()));
        for (std::size_t c = 0; c < support_.size(); ++c)
        {
            const auto &w = support_.indices()[c];
            for (long long ix = 0; ix < nx; ++ix)
                for (long long iy = 0; iy < ny; ++iy)
                {
                    // Reduce the integer phase numerators first to keep the angle small and exact
                    const long long px = ((w.l_x * ix) % nx + nx) % nx;
                    const long long py = ((w.l_y * iy) % ny + ny) % ny;
                    const double phase = two_pi * (static_cast<double>(px) / static_cast<double>(nx) +
                                                   static_cast<double>(py) / static_cast<double>(ny));
                    matrix_(ix * ny + iy, static_cast<Eigen::Index>(c)) = std::polar(amp, phase);
                }
        }
    }

    WavenumberChannel::WavenumberChannel(CMatrix entries, WavenumberSupport rx_support, WavenumberSupport tx_support)
        : entries_(std::move(entries)), rx_(std::move(rx_support)), tx_(std::move(tx_support))
    {
        if (entries_.rows() != static_cast<Eigen::Index>(rx_.size()) ||
            entries_.cols() != static_cast<Eigen::Index>(tx_.size()))
            throw ShapeMismatch("wavenumber channel shape does not match |xi_R| x |xi_T|");
        if (!entries_.allFinite())
            throw NonFinite("wavenumber channel contains non-finite entries");
    }

    WavenumberChannel to_wavenumber(const ChannelMatrix &h, const Dictionary &rx_dict, const Dictionary &tx_dict)
    {
        if (h.rows() != rx_dict.num_elements() || h.cols() != tx_dict.num_elements())
            throw ShapeMismatch("channel and dictionaries have incompatible shapes");
        CMatrix ha = rx_dict.matrix().adjoint() * h.entries() * tx_dict.matrix();
        return WavenumberChannel(std::move(ha), rx_dict.support(), tx_dict.support());
    }

    ChannelMatrix from_wavenumber(const WavenumberChannel &h_a, const Dictionary &rx_dict, const Dictionary &tx_dict)
    {
        if (h_a.rows() != rx_dict.num_codewords() || h_a.cols() != tx_dict.num_codewords())
            throw ShapeMismatch("wavenumber channel and dictionaries have incompatible shapes");
        CMatrix h = rx_dict.matrix() * h_a.entries() * tx_dict.matrix().adjoint();
        return ChannelMatrix(std::move(h), tx_dict.support().geom(), rx_dict.support().geom());
    }
}
