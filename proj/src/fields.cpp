#include "hyperns/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperns {

namespace {

NodeMatrix zeros(const PolarGrid& g) {
    return NodeMatrix::Zero(static_cast<Eigen::Index>(g.n_rho()), static_cast<Eigen::Index>(g.n_theta()));
}

void require_shape(const PolarGrid& g, const NodeMatrix& m, const char* what) {
    if (m.rows() != static_cast<Eigen::Index>(g.n_rho()) ||
        m.cols() != static_cast<Eigen::Index>(g.n_theta())) {
        throw std::invalid_argument(std::string(what) + ": value matrix does not match grid shape");
    }
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get()) {
        throw std::invalid_argument("field arithmetic across different grids");
    }
}

double weighted_power_sum(const PolarGrid& g, const NodeMatrix& abs_values, double p) {
    if (!(p >= 1.0)) {
        throw std::invalid_argument("lp_norm: p must be >= 1");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < abs_values.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index k = 0; k < abs_values.cols(); ++k) {
            const double v = abs_values(i, k);
            row += (p == 2.0) ? v * v : std::pow(v, p);
        }
        sum += row * g.quad_weight(static_cast<std::size_t>(i));
    }
    return std::pow(sum, 1.0 / p);
}

}  // namespace

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)), values_(zeros(*grid_)) {}

ScalarField::ScalarField(GridPtr grid, NodeMatrix values) : grid_(std::move(grid)), values_(std::move(values)) {
    require_shape(*grid_, values_, "ScalarField");
}

ScalarField ScalarField::sample(GridPtr grid, const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid->n_rho(); ++i) {
        for (std::size_t k = 0; k < grid->n_theta(); ++k) {
            out.values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = f(grid->rho(i), grid->theta(k));
        }
    }
    return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_);
    values_ += other.values_;
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_);
    values_ -= other.values_;
    return *this;
}

ScalarField& ScalarField::operator*=(double c) {
    values_ *= c;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

OneForm::OneForm(GridPtr grid) : grid_(std::move(grid)), rho_(zeros(*grid_)), theta_(zeros(*grid_)) {}

OneForm::OneForm(GridPtr grid, NodeMatrix comp_rho, NodeMatrix comp_theta)
    : grid_(std::move(grid)), rho_(std::move(comp_rho)), theta_(std::move(comp_theta)) {
    require_shape(*grid_, rho_, "OneForm");
    require_shape(*grid_, theta_, "OneForm");
}

NodeMatrix& OneForm::mutable_comp_rho() {
    divergence_free_ = false;
    stream_.reset();
    return rho_;
}

NodeMatrix& OneForm::mutable_comp_theta() {
    divergence_free_ = false;
    stream_.reset();
    return theta_;
}

void OneForm::mark_divergence_free(std::optional<NodeMatrix> stream) {
    if (stream) {
        require_shape(*grid_, *stream, "OneForm stream function");
    }
    divergence_free_ = true;
    stream_ = std::move(stream);
}

ScalarField OneForm::pointwise_norm() const {
    return ScalarField(grid_, (rho_.array().square() + theta_.array().square()).sqrt().matrix());
}

// Sums and multiples of divergence-free forms stay divergence-free, and the
// cached stream functions combine the same way.
OneForm& OneForm::operator+=(const OneForm& other) {
    require_same_grid(grid_, other.grid_);
    rho_ += other.rho_;
    theta_ += other.theta_;
    const bool keep = divergence_free_ && other.divergence_free_;
    if (keep && stream_ && other.stream_) {
        *stream_ += *other.stream_;
    } else {
        stream_.reset();
    }
    divergence_free_ = keep;
    return *this;
}

OneForm& OneForm::operator-=(const OneForm& other) {
    require_same_grid(grid_, other.grid_);
    rho_ -= other.rho_;
    theta_ -= other.theta_;
    const bool keep = divergence_free_ && other.divergence_free_;
    if (keep && stream_ && other.stream_) {
        *stream_ -= *other.stream_;
    } else {
        stream_.reset();
    }
    divergence_free_ = keep;
    return *this;
}

OneForm& OneForm::operator*=(double c) {
    rho_ *= c;
    theta_ *= c;
    if (stream_) {
        *stream_ *= c;
    }
    return *this;
}

OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
OneForm operator*(double c, OneForm a) { return a *= c; }

ScalarField Tensor2Field::pointwise_norm() const {
    NodeMatrix acc = comp[0][0].array().square();
    acc.array() += comp[0][1].array().square();
    acc.array() += comp[1][0].array().square();
    acc.array() += comp[1][1].array().square();
    return ScalarField(grid, acc.array().sqrt().matrix());
}

double lp_norm(const ScalarField& f, double p) {
    return weighted_power_sum(f.grid(), f.values().cwiseAbs(), p);
}

double lp_norm(const OneForm& u, double p) {
    return weighted_power_sum(u.grid(), u.pointwise_norm().values(), p);
}

double lp_norm(const Tensor2Field& t, double p) {
    return weighted_power_sum(*t.grid, t.pointwise_norm().values(), p);
}

double sup_norm(const ScalarField& f) { return f.values().cwiseAbs().maxCoeff(); }

double sup_norm(const OneForm& u) { return u.pointwise_norm().values().maxCoeff(); }

VectorField sharp(const OneForm& u) { return {u.grid_ptr(), u.comp_rho(), u.comp_theta()}; }

OneForm flat(const VectorField& v) { return OneForm(v.grid, v.comp_rho, v.comp_theta); }

OneForm sharp_flat(const OneForm& u) {
    OneForm out = flat(sharp(u));
    if (u.divergence_free()) {
        out.mark_divergence_free(u.stream_function());
    }
    return out;
}

}  // namespace hyperns
