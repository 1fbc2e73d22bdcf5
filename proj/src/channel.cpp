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

#include "wavekit/channel.hpp"
#include "wavekit/errors.hpp"
#include "detail/random.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>

namespace wavekit
{
    namespace
    {
        constexpr double min_distance_m = 1e-9;

        void check_distance(double r)
        {
            if (!(r >= min_distance_m))
                throw ZeroDistance("element or scatterer separation below 1e-9 m");
        }

        // Circularly-symmetric complex Gaussian with the given total variance
        cdouble draw_cn(std::mt19937_64 &rng, double variance)
        {
            std::normal_distribution<double> nd(0.0, std::sqrt(0.5 * variance));
            const double re = nd(rng);
            const double im = nd(rng);
            return {re, im};
        }

    }

    ChannelMatrix::ChannelMatrix(CMatrix entries, ArrayGeometry tx_geom, ArrayGeometry rx_geom)
        : entries_(std::move(entries)), tx_(std::move(tx_geom)), rx_(std::move(rx_geom))
    {
        if (entries_.rows() != static_cast<Eigen::Index>(rx_.num_elements()) ||
            entries_.cols() != static_cast<Eigen::Index>(tx_.num_elements()))
            throw ShapeMismatch("channel shape does not match N_R x N_T");
        if (!entries_.allFinite())
            throw NonFinite("channel matrix contains non-finite entries");
    }

    ChannelMatrix ChannelMatrix::operator+(const ChannelMatrix &other) const
    {
        if (other.rows() != rows() || other.cols() != cols())
            throw ShapeMismatch("cannot add channels of different shape");
        return ChannelMatrix(entries_ + other.entries_, tx_, rx_);
    }

    void ChannelConfig::validate() const
    {
        if (!(los_gain_variance >= 0.0) || !(nlos_gain_variance >= 0.0))
            throw InvalidArgument("gain variances must be nonnegative");
        const auto &r = scatterer_placement;
        if (!(r.radius_min_m > 0.0))
            throw InvalidArgument("scatterer radius_min_m must be positive");
        if (r.radius_max_m && !(*r.radius_max_m >= r.radius_min_m))
            throw InvalidArgument("scatterer radius_max_m must be >= radius_min_m");
        if (!(r.azimuth_max_deg >= r.azimuth_min_deg) || !(r.elevation_max_deg >= r.elevation_min_deg))
            throw InvalidArgument("scatterer angular ranges must be ordered");
        if (r.elevation_min_deg < -90.0 || r.elevation_max_deg > 90.0)
            throw InvalidArgument("scatterer elevation must lie in [-90, 90] degrees");
    }

    ChannelMatrix synthesize_los(const ArrayGeometry &tx, const ArrayGeometry &rx, const SystemParams &params, cdouble g0)
    {
        const auto ptx = element_positions(tx);
        const auto prx = element_positions(rx);
        const double k = params.wavenumber_rad_per_m();

        CMatrix h(static_cast<Eigen::Index>(prx.size()), static_cast<Eigen::Index>(ptx.size()));
        for (std::size_t r = 0; r < prx.size(); ++r)
            for (std::size_t t = 0; t < ptx.size(); ++t)
            {
                const double dist = (prx[r] - ptx[t]).norm();
                check_distance(dist);
                h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = g0 * std::polar(1.0 / dist, -k * dist);
            }
        return ChannelMatrix(std::move(h), tx, rx);
    }

    ChannelMatrix synthesize_nlos(const ArrayGeometry &tx, const ArrayGeometry &rx, const SystemParams &params,
                                  const std::vector<Scatterer> &scatterers)
    {
        const auto ptx = element_positions(tx);
        const auto prx = element_positions(rx);
        const double k = params.wavenumber_rad_per_m();
        const double norm_t = 1.0 / std::sqrt(static_cast<double>(ptx.size()));
        const double norm_r = 1.0 / std::sqrt(static_cast<double>(prx.size()));

        CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(prx.size()), static_cast<Eigen::Index>(ptx.size()));
        CVector a_r(static_cast<Eigen::Index>(prx.size()));
        CVector a_t(static_cast<Eigen::Index>(ptx.size()));

        for (const auto &s : scatterers)
        {
            if (!s.position_m.allFinite() || !std::isfinite(s.complex_gain.real()) || !std::isfinite(s.complex_gain.imag()))
                throw NonFinite("scatterer has non-finite position or gain");

            const double d0_r = (s.position_m - rx.center_position_m()).norm();
            const double d0_t = (s.position_m - tx.center_position_m()).norm();
            for (std::size_t i = 0; i < prx.size(); ++i)
            {
                const double d = (s.position_m - prx[i]).norm();
                check_distance(d);
                a_r(static_cast<Eigen::Index>(i)) = std::polar(norm_r, -k * (d - d0_r));
            }
            for (std::size_t i = 0; i < ptx.size(); ++i)
            {
                const double d = (s.position_m - ptx[i]).norm();
                check_distance(d);
                a_t(static_cast<Eigen::Index>(i)) = std::polar(norm_t, k * (d - d0_t));
            }
            h.noalias() += s.complex_gain * a_r * a_t.adjoint();
        }
        return ChannelMatrix(std::move(h), tx, rx);
    }

    ChannelRealization draw_realization(const ChannelConfig &cfg, const ArrayGeometry &tx, const ArrayGeometry &rx)
    {
        cfg.validate();
        std::mt19937_64 rng(cfg.rng_seed);

        ChannelRealization out;
        out.los_gain = draw_cn(rng, cfg.los_gain_variance);

        const auto &reg = cfg.scatterer_placement;
        const double link = (rx.center_position_m() - tx.center_position_m()).norm();
        const double r_min = reg.radius_min_m;
        const double r_max = std::max(r_min, reg.radius_max_m.value_or(link));
        constexpr double deg = std::numbers::pi / 180.0;

        out.scatterers.reserve(cfg.num_scatterers);
        for (std::size_t q = 0; q < cfg.num_scatterers; ++q)
        {
            const double u = detail::uniform(rng, 0.0, 1.0);
            const double r = std::cbrt(r_min * r_min * r_min + u * (r_max * r_max * r_max - r_min * r_min * r_min));
            const double az = detail::uniform(rng, reg.azimuth_min_deg, reg.azimuth_max_deg) * deg;
            // Uniform over the sphere patch: sin(elevation) is uniform
            const double el = std::asin(detail::uniform(rng, std::sin(reg.elevation_min_deg * deg), std::sin(reg.elevation_max_deg * deg)));
            const Vec3 local(std::sin(az) * std::cos(el), std::sin(el), std::cos(az) * std::cos(el));

            Scatterer s;
            s.position_m = tx.center_position_m() + tx.orientation() * (r * local);
            s.complex_gain = draw_cn(rng, cfg.nlos_gain_variance);
            out.scatterers.push_back(s);
        }
        return out;
    }

    ChannelMatrix synthesize_channel(const ChannelConfig &cfg, const ArrayGeometry &tx, const ArrayGeometry &rx,
                                     const SystemParams &params)
    {
        const auto real = draw_realization(cfg, tx, rx);
        auto h = synthesize_los(tx, rx, params, real.los_gain);
        if (real.scatterers.empty())
            return h;
        return h + synthesize_nlos(tx, rx, params, real.scatterers);
    }

    // ---------------------------------------------------------------- matrix files

    void write_matrix_text(const std::filesystem::path &path, const CMatrix &m)
    {
        std::ofstream f(path);
        if (!f)
            throw Error("cannot open " + path.string() + " for writing");
        f << m.rows() << ' ' << m.cols() << '\n';
        f << std::setprecision(17);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                f << m(r, c).real() << ' ' << m(r, c).imag() << '\n';
        if (!f)
            throw Error("write failed for " + path.string());
    }

    CMatrix read_matrix_text(const std::filesystem::path &path)
    {
        std::ifstream f(path);
        if (!f)
            throw Error("cannot open " + path.string());
        long long rows = -1, cols = -1;
        if (!(f >> rows >> cols) || rows < 0 || cols < 0)
            throw Error("malformed matrix header in " + path.string());
        CMatrix m(rows, cols);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                double re = 0.0, im = 0.0;
                if (!(f >> re >> im))
                    throw Error("truncated matrix file " + path.string());
                m(r, c) = {re, im};
            }
        return m;
    }

    namespace
    {
        template <typename T>
        void put_le(std::ostream &os, T value)
        {
            static_assert(sizeof(T) == 8);
            std::uint64_t bits;
            std::memcpy(&bits, &value, 8);
            unsigned char buf[8];
            for (int i = 0; i < 8; ++i)
                buf[i] = static_cast<unsigned char>(bits >> (8 * i));
            os.write(reinterpret_cast<const char *>(buf), 8);
        }

        template <typename T>
        T get_le(std::istream &is)
        {
            unsigned char buf[8];
            if (!is.read(reinterpret_cast<char *>(buf), 8))
                throw Error("truncated binary matrix file");
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i)
                bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
            T value;
            std::memcpy(&value, &bits, 8);
            return value;
        }
    }

    void write_matrix_binary(const std::filesystem::path &path, const CMatrix &m)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw Error("cannot open " + path.string() + " for writing");
        put_le<std::uint64_t>(f, static_cast<std::uint64_t>(m.rows()));
        put_le<std::uint64_t>(f, static_cast<std::uint64_t>(m.cols()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                put_le<double>(f, m(r, c).real());
                put_le<double>(f, m(r, c).imag());
            }
        if (!f)
            throw Error("write failed for " + path.string());
    }

    CMatrix read_matrix_binary(const std::filesystem::path &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw Error("cannot open " + path.string());
        const auto rows = get_le<std::uint64_t>(f);
        const auto cols = get_le<std::uint64_t>(f);
        if (rows > (1u << 24) || cols > (1u << 24))
            throw Error("implausible matrix dimensions in " + path.string());
        CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                const double re = get_le<double>(f);
                const double im = get_le<double>(f);
                m(r, c) = {re, im};
            }
        return m;
    }
}
