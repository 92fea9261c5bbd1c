#include "npcure/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "npcure/errors.hpp"

namespace npcure {

SurvivalSample::SurvivalSample(std::vector<Observation> observations)
    : obs_(std::move(observations)) {
    if (obs_.empty()) throw DomainError("SurvivalSample requires at least one observation");
    for (const Observation& o : obs_) {
        if (!(o.t >= 0.0) || !std::isfinite(o.t))
            throw DomainError("observation time must be finite and non-negative");
        if (o.status != 0 && o.status != 1)
            throw DomainError("observation status must be 0 or 1");
        if (!std::isfinite(o.x)) throw DomainError("covariate must be finite");
    }
    order_.resize(obs_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        if (obs_[a].t != obs_[b].t) return obs_[a].t < obs_[b].t;
        if (obs_[a].status != obs_[b].status) return obs_[a].status > obs_[b].status;
        return obs_[a].x < obs_[b].x;
    });
    xs_.reserve(obs_.size());
    xs_sorted_.reserve(obs_.size());
    x_min_ = obs_[0].x;
    x_max_ = obs_[0].x;
    for (const Observation& o : obs_) {
        xs_.push_back(o.x);
        x_min_ = std::min(x_min_, o.x);
        x_max_ = std::max(x_max_, o.x);
    }
    for (std::size_t idx : order_) {
        const Observation& o = obs_[idx];
        xs_sorted_.push_back(o.x);
        if (o.status == 1) {
            ++uncensored_;
            t1max_ = o.t;  // canonical order is time-ascending
        }
    }
}

}  // namespace npcure
