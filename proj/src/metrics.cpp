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

#include "wavekit/metrics.hpp"
#include "wavekit/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace wavekit
{
    namespace
    {
        constexpr double inv_ln2 = 1.0 / std::numbers::ln2;

        ReportMetadata metadata_of(const ChannelMatrix &h)
        {
            ReportMetadata m;
            m.distance_m = (h.rx_geom().center_position_m() - h.tx_geom().center_position_m()).norm();
            m.n_x = h.tx_geom().n_x();
            m.n_y = h.tx_geom().n_y();
            return m;
        }

        double sum_log2_1p(const RVector &sinr)
        {
            double c = 0.0;
            for (Eigen::Index k = 0; k < sinr.size(); ++k)
                c += std::log1p(sinr[k]);
            return c * inv_ln2;
        }
    }

    std::string_view to_string(Scheme s) noexcept
    {
        switch (s)
        {
        case Scheme::WD_DC:
            return "WD_DC";
        case Scheme::WD_WF:
            return "WD_WF";
        case Scheme::WD_IWF:
            return "WD_IWF";
        case Scheme::WD_PSO:
            return "WD_PSO";
        case Scheme::SVD_BOUND:
            return "SVD_BOUND";
        case Scheme::SPATIAL_DIVISION:
            return "SPATIAL_DIVISION";
        }
        return "?";
    }

    std::optional<Scheme> scheme_from_string(std::string_view name) noexcept
    {
        for (auto s : {Scheme::WD_DC, Scheme::WD_WF, Scheme::WD_IWF, Scheme::WD_PSO, Scheme::SVD_BOUND, Scheme::SPATIAL_DIVISION})
            if (to_string(s) == name)
                return s;
        return std::nullopt;
    }

    bool is_wavenumber_scheme(Scheme s) noexcept
    {
        return s == Scheme::WD_DC || s == Scheme::WD_WF || s == Scheme::WD_IWF || s == Scheme::WD_PSO;
    }

    SvdDecomposition svd_decompose(const CMatrix &h, double rank_tol, bool compute_vectors)
    {
        SvdDecomposition out;
        if (h.size() == 0)
            return out;
        const unsigned flags = compute_vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
        Eigen::BDCSVD<CMatrix> svd(h, flags);
        out.singular_values = svd.singularValues();
        if (compute_vectors)
        {
            out.left_vectors = svd.matrixU();
            out.right_vectors = svd.matrixV();
        }
        const double s1 = out.singular_values.size() ? out.singular_values[0] : 0.0;
        for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
            if (s1 > 0.0 && out.singular_values[i] > rank_tol * s1)
                ++out.rank_effective;
        return out;
    }

    CapacityReport svd_capacity(const ChannelMatrix &h, const SystemParams &params, std::size_t max_streams, double rank_tol)
    {
        CapacityReport rep;
        rep.scheme = Scheme::SVD_BOUND;
        rep.metadata = metadata_of(h);

        const auto svd = svd_decompose(h.entries(), rank_tol, false);
        const auto modes = static_cast<Eigen::Index>(std::min(svd.rank_effective, max_streams));
        if (modes == 0)
            return rep;

        const RVector lambda = svd.singular_values.head(modes).array().square().matrix();
        const RVector p = waterfill(lambda, params.total_tx_power_w(), params.noise_power_w());
        rep.per_stream_sinr = (p.array() * lambda.array() / params.noise_power_w()).matrix();
        rep.capacity_bits = sum_log2_1p(rep.per_stream_sinr);
        rep.num_streams = static_cast<std::size_t>((p.array() > 0.0).count());
        return rep;
    }

    CapacityReport spatial_division_capacity(const ChannelMatrix &h, const SystemParams &params)
    {
        CapacityReport rep;
        rep.scheme = Scheme::SPATIAL_DIVISION;
        rep.metadata = metadata_of(h);
        rep.num_streams = 1;

        const auto svd = svd_decompose(h.entries(), default_rank_tol, false);
        const double s1 = svd.singular_values.size() ? svd.singular_values[0] : 0.0;
        rep.per_stream_sinr = RVector::Constant(1, params.total_tx_power_w() * s1 * s1 / params.noise_power_w());
        rep.capacity_bits = sum_log2_1p(rep.per_stream_sinr);
        return rep;
    }

    RVector wd_sinr(const WavenumberChannel &h_a, const StreamAssignment &assign, const RVector &p, double noise)
    {
        if (p.size() != static_cast<Eigen::Index>(assign.size()))
            throw ShapeMismatch("power vector length differs from the stream count");
        CouplingMatrix c = build_coupling(gain_matrix(h_a), assign, noise, 1.0);
        return stream_sinr(c, p);
    }

    HybridPrecoder assemble_hybrid(const Dictionary &tx_dict, const Dictionary &rx_dict, const StreamAssignment &assign,
                                   const RVector &p)
    {
        const auto k = static_cast<Eigen::Index>(assign.size());
        if (p.size() != k)
            throw ShapeMismatch("power vector length differs from the stream count");
        if ((p.array() < 0.0).any() || !p.allFinite())
            throw InvalidArgument("stream powers must be finite and nonnegative");

        HybridPrecoder hp;
        hp.analog_tx.resize(tx_dict.num_elements(), k);
        hp.analog_rx.resize(k, rx_dict.num_elements());
        hp.digital_tx = CMatrix::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
        {
            const auto &pr = assign.pairs[static_cast<std::size_t>(i)];
            if (pr.c >= static_cast<std::size_t>(tx_dict.num_codewords()) || pr.r >= static_cast<std::size_t>(rx_dict.num_codewords()))
                throw IndexOutOfRange("assignment pair outside the dictionaries");
            hp.analog_tx.col(i) = tx_dict.matrix().col(static_cast<Eigen::Index>(pr.c));
            hp.analog_rx.row(i) = rx_dict.matrix().col(static_cast<Eigen::Index>(pr.r)).adjoint();
            hp.digital_tx(i, i) = std::sqrt(p[i]);
        }
        return hp;
    }

    HybridPrecoder assemble_hybrid(const Dictionary &tx_dict, const Dictionary &rx_dict, const StreamAssignment &assign,
                                   const RVector &p, const SystemParams &params)
    {
        if (assign.size() > params.num_rf_chains_tx() || assign.size() > params.num_rf_chains_rx())
            throw RfChainLimit("stream count " + std::to_string(assign.size()) + " exceeds the available RF chains");
        return assemble_hybrid(tx_dict, rx_dict, assign, p);
    }

    double keystone_error(const HybridPrecoder &hp, const ChannelMatrix &h, const WavenumberChannel &h_a,
                          const StreamAssignment &assign)
    {
        const CMatrix eff = hp.analog_rx * h.entries() * hp.analog_tx;
        double err = 0.0;
        for (std::size_t k = 0; k < assign.size(); ++k)
            for (std::size_t m = 0; m < assign.size(); ++m)
            {
                const cdouble ref = h_a.entries()(static_cast<Eigen::Index>(assign.pairs[k].r), static_cast<Eigen::Index>(assign.pairs[m].c));
                err = std::max(err, std::abs(eff(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) - ref));
            }
        return err;
    }

    DictionaryPair build_dictionaries(const ArrayGeometry &tx, const ArrayGeometry &rx, const SystemParams &params, double beta)
    {
        return DictionaryPair{build_dictionary(enumerate_support(rx, params, beta)),
                              build_dictionary(enumerate_support(tx, params, beta))};
    }

    WdSelection wd_select(const ChannelMatrix &h, const SystemParams &params, const DictionaryPair &dicts, const WdOptions &opts)
    {
        WavenumberChannel h_a = to_wavenumber(h, dicts.rx, dicts.tx);
        RMatrix gains = gain_matrix(h_a);
        StreamAssignment assign = opts.selection == SelectionMethod::greedy ? select_greedy(gains) : select_hungarian(gains);
        if (opts.max_streams)
            assign = truncate_assignment(assign, gains, *opts.max_streams);
        if (assign.size() > params.num_rf_chains_tx() || assign.size() > params.num_rf_chains_rx())
            throw RfChainLimit("stream count " + std::to_string(assign.size()) + " exceeds the available RF chains");
        return WdSelection{std::move(h_a), std::move(gains), std::move(assign)};
    }

    WdResult wd_allocate(const WdSelection &sel, const SystemParams &params, const WdOptions &opts)
    {
        const CouplingMatrix coupling = build_coupling(sel.gains, sel.assignment, params.noise_power_w(), params.total_tx_power_w());

        WdResult res;
        switch (opts.allocator)
        {
        case Scheme::WD_DC:
            res.allocation = allocate_dc(coupling, opts.dc);
            break;
        case Scheme::WD_WF:
            res.allocation = allocate_waterfill(coupling);
            break;
        case Scheme::WD_IWF:
            res.allocation = allocate_iwf(coupling, opts.iwf);
            break;
        case Scheme::WD_PSO:
            res.allocation = allocate_pso(coupling, opts.pso);
            break;
        default:
            throw InvalidArgument("allocator must be a wavenumber-domain scheme");
        }

        auto &rep = res.report;
        rep.scheme = opts.allocator;
        rep.metadata.beta = sel.h_a.tx_support().beta();
        rep.metadata.n_x = sel.h_a.tx_support().geom().n_x();
        rep.metadata.n_y = sel.h_a.tx_support().geom().n_y();
        rep.metadata.distance_m = (sel.h_a.rx_support().geom().center_position_m() - sel.h_a.tx_support().geom().center_position_m()).norm();
        rep.per_stream_sinr = stream_sinr(coupling, res.allocation.powers_w);
        rep.capacity_bits = sum_log2_1p(rep.per_stream_sinr);
        rep.num_streams = static_cast<std::size_t>((res.allocation.powers_w.array() > 0.0).count());
        return res;
    }

    WdResult wd_pipeline(const ChannelMatrix &h, const SystemParams &params, const WdOptions &opts)
    {
        const auto dicts = build_dictionaries(h.tx_geom(), h.rx_geom(), params, opts.beta);
        const auto sel = wd_select(h, params, dicts, opts);
        auto res = wd_allocate(sel, params, opts);
        if (opts.verify_keystone)
        {
            const auto hp = assemble_hybrid(dicts.tx, dicts.rx, sel.assignment, res.allocation.powers_w, params);
            const double scale = std::max(1.0, sel.h_a.entries().cwiseAbs().maxCoeff());
            if (!(keystone_error(hp, h, sel.h_a, sel.assignment) <= opts.keystone_tol * scale))
                throw Error("hybrid precoder does not reproduce the wavenumber channel entries");
        }
        return res;
    }

    CapacityReport wd_capacity_report(const ChannelMatrix &h, const SystemParams &params, double beta, Scheme solver)
    {
        WdOptions opts;
        opts.beta = beta;
        opts.allocator = solver;
        return wd_capacity_report(h, params, opts);
    }

    CapacityReport wd_capacity_report(const ChannelMatrix &h, const SystemParams &params, const WdOptions &opts)
    {
        return wd_pipeline(h, params, opts).report;
    }
}
