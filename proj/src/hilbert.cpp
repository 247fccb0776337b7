#include "epiq/hilbert.hpp"

#include <cmath>

#include "epiq/errors.hpp"

namespace epiq {

std::string to_string(RealizationMode mode) {
  return mode == RealizationMode::full_group ? "theorem1" : "indicator_fallback";
}

AmplitudeVector::AmplitudeVector(BasisTag tag, CVector coords)
    : tag_(tag), coords_(std::move(coords)) {
  if (!coords_.allFinite()) throw BasisMismatch("amplitude vector has non-finite coordinates");
}

void AmplitudeVector::require_same_basis(const AmplitudeVector& other) const {
  if (tag_ != other.tag_ || coords_.size() != other.coords_.size())
    throw BasisMismatch("vectors live in different bases");
}

Complex AmplitudeVector::inner(const AmplitudeVector& other) const {
  require_same_basis(other);
  return coords_.dot(other.coords_);
}

AmplitudeVector AmplitudeVector::operator+(const AmplitudeVector& other) const {
  require_same_basis(other);
  return {tag_, coords_ + other.coords_};
}

AmplitudeVector AmplitudeVector::operator-(const AmplitudeVector& other) const {
  require_same_basis(other);
  return {tag_, coords_ - other.coords_};
}

AmplitudeVector AmplitudeVector::operator*(Complex s) const { return {tag_, coords_ * s}; }

RegularRepresentation::RegularRepresentation(const GroupAction& action)
    : perms_(action.perms()), dim_(action.num_points()) {}

CVector RegularRepresentation::apply(ElementIndex g, const CVector& f) const {
  const auto& p = perms_.at(g);
  CVector out(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i) out(static_cast<Eigen::Index>(i)) = f(static_cast<Eigen::Index>(p[i]));
  return out;
}

CMatrix RegularRepresentation::matrix(ElementIndex g) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  CMatrix m = CMatrix::Zero(n, n);
  const auto& p = perms_.at(g);
  for (std::size_t i = 0; i < dim_; ++i)
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p[i])) = 1.0;
  return m;
}

Permutation RegularRepresentation::compose(ElementIndex g, ElementIndex h) const {
  // (U(g)U(h)f)(phi) = (U(h)f)(phi g) = f((phi g) h)
  const auto& pg = perms_.at(g);
  const auto& ph = perms_.at(h);
  Permutation out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = ph[pg[i]];
  return out;
}

RegularRepresentation build_regular_rep(const ExperimentModel& model) {
  return RegularRepresentation(model.action());
}

SubspaceBasis indicator_basis(const ExperimentModel& model, ExperimentIndex a) {
  const auto& exp = model.catalog().experiment(a);
  SubspaceBasis basis{a, {}};
  const auto n = static_cast<Eigen::Index>(model.num_points());
  for (const auto& block : exp.blocks()) {
    CVector v = CVector::Zero(n);
    const double w = 1.0 / std::sqrt(static_cast<double>(block.size()));
    for (auto p : block) v(static_cast<Eigen::Index>(p)) = w;
    basis.vectors.emplace_back(BasisTag::ambient, std::move(v));
  }
  return basis;
}

GeneratorFactor generator_factor(const ExperimentModel& model, const RegularRepresentation& u,
                                 const SubspaceBasis& common, ExperimentIndex a, ElementIndex g) {
  const auto& group = model.group();
  const auto g_ca = model.catalog().connection(model.catalog().reference(), a);
  const auto d = static_cast<Eigen::Index>(common.vectors.size());
  GeneratorFactor out{CMatrix::Zero(d, d), 0.0};
  // Overlaps are counted on 0/1 indicators and scaled once, so blocks of equal
  // size give exactly 0 or 1.
  std::vector<CVector> support;
  std::vector<double> size;
  for (const auto& f : common.vectors) {
    CVector s = (f.coords().array().abs() > 0.0).cast<double>().cast<Complex>().matrix();
    size.push_back(s.real().sum());
    support.push_back(std::move(s));
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const CVector moved = u.apply(group.inverse(g_ca), u.apply(g, u.apply(g_ca, support[kk])));
    const CVector v = moved / std::sqrt(size[kk]);
    CVector inside = CVector::Zero(v.size());
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      out.matrix(j, k) = support[jj].dot(moved) / std::sqrt(size[jj] * size[kk]);
      inside += out.matrix(j, k) * common.vectors[jj].coords();
    }
    out.outside_residual = std::max(out.outside_residual, (v - inside).norm());
  }
  return out;
}

const CMatrix& Representation::at(ElementIndex g) const {
  auto it = matrices.find(g);
  if (it == matrices.end())
    throw NotInGeneratedSubgroup("W is not defined on element " + std::to_string(g));
  return it->second;
}

Representation build_W(const ExperimentModel& model, const Tolerances& tol) {
  const auto& catalog = model.catalog();
  const auto& group = model.group();
  std::vector<ElementSet> induced;
  for (ExperimentIndex a = 0; a < catalog.size(); ++a)
    induced.push_back(derive_induced_subgroup(model, a).elements);

  const auto u = build_regular_rep(model);
  const auto common = indicator_basis(model, catalog.reference());

  std::map<std::pair<std::size_t, ElementIndex>, CMatrix> factors;
  Representation w;
  for (std::size_t a = 0; a < induced.size(); ++a)
    for (auto g : induced[a]) {
      auto f = generator_factor(model, u, common, a, g);
      w.invariance_residual = std::max(w.invariance_residual, f.outside_residual);
      factors.emplace(std::make_pair(a, g), std::move(f.matrix));
    }

  WordTable words(group, induced);
  w.domain = words.domain();
  w.mode = w.domain.size() == group.size() ? RealizationMode::full_group
                                           : RealizationMode::indicator_fallback;
  const auto d = static_cast<Eigen::Index>(common.vectors.size());
  for (auto g : w.domain) {
    CMatrix m = CMatrix::Identity(d, d);
    for (const auto& letter : *words.word(g)) m = m * factors.at({letter.set_id, letter.element});
    w.matrices.emplace(g, std::move(m));
  }

  // Every word is a shortest word extended letter by letter, so agreement of
  // W(g)F(x) with W(gx) for all g and letters x covers every decomposition.
  for (auto g : w.domain)
    for (const auto& [key, factor] : factors) {
      const auto gx = group.multiply(g, key.second);
      const double r = matrix_norm(w.matrices.at(g) * factor - w.matrices.at(gx), tol.norm);
      w.word_consistency_residual = std::max(w.word_consistency_residual, r);
      if (r > tol.word_consistency)
        throw WellDefinednessViolation(
            "W(" + group.name(g) + ") F(" + group.name(key.second) + ") differs from W(" +
            group.name(gx) + ") by " + std::to_string(r));
    }
  return w;
}

StateVector state_vector(const ExperimentModel& model, const Representation& w,
                         ExperimentIndex a, ValueIndex k) {
  const auto& catalog = model.catalog();
  const auto c = catalog.reference();
  const auto g_ca = catalog.connection(c, a);
  const auto& exp = catalog.experiment(a);
  if (k >= exp.num_values()) throw std::out_of_range("value index out of range");
  const auto common = indicator_basis(model, c);
  const auto d = static_cast<Eigen::Index>(common.vectors.size());

  CVector coords;
  bool fallback = false;
  if (w.contains(g_ca)) {
    auto beta = value_bijection(model, c, a, g_ca);
    if (!beta) throw ModelInvalid("connection from the reference to '" + exp.label() + "' is invalid");
    std::size_t source = 0;
    while ((*beta)[source] != k) ++source;
    coords = w.at(g_ca).col(static_cast<Eigen::Index>(source));
  } else {
    fallback = true;
    const auto u = build_regular_rep(model);
    const auto own = indicator_basis(model, a);
    CVector v = u.apply(model.group().inverse(g_ca), own.vectors[k].coords());
    coords = CVector::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) coords(j) = common.vectors[static_cast<std::size_t>(j)].coords().dot(v);
    const double norm = coords.norm();
    if (norm < 1e-12)
      throw DegenerateFallback("indicator of value '" + exp.value(k).name + "' of '" +
                               exp.label() + "' has no overlap with the common space");
    coords /= norm;
  }
  return StateVector{a, k, AmplitudeVector(BasisTag::common, apply_phase_convention(coords)),
                     fallback};
}

ObservableOperator observable(const ExperimentModel& model,
                              const std::vector<StateVector>& states_of_a) {
  if (states_of_a.empty()) throw std::invalid_argument("no states");
  const auto a = states_of_a.front().experiment;
  const auto& exp = model.catalog().experiment(a);
  const auto d = states_of_a.front().vector.coords().size();
  ObservableOperator out{a, CMatrix::Zero(d, d), exp.eigenvalues()};
  for (const auto& s : states_of_a)
    out.matrix += exp.value(s.value_index).eigenvalue * projector(s.vector.coords());
  return out;
}

QuantumModel::QuantumModel(ExperimentModel model, Tolerances tol)
    : model_(std::move(model)), tol_(tol) {}

QuantumModel QuantumModel::build(ExperimentModel model, Tolerances tol) {
  QuantumModel qm(std::move(model), tol);
  qm.validation_ = validate_assumptions(qm.model_);
  if (!qm.validation_.ok()) {
    std::string msg = "model '" + qm.model_.name() + "' fails validation:";
    for (const auto& c : qm.validation_.checks)
      if (c.status == CheckStatus::fail) msg += " " + c.id;
    throw ModelInvalid(msg);
  }
  const auto& catalog = qm.model_.catalog();
  for (ExperimentIndex a = 0; a < catalog.size(); ++a)
    qm.induced_.push_back(derive_induced_subgroup(qm.model_, a).elements);
  qm.w_ = build_W(qm.model_, tol);
  qm.dimension_ = catalog.experiment(catalog.reference()).num_values();
  for (ExperimentIndex a = 0; a < catalog.size(); ++a) {
    std::vector<StateVector> states;
    for (ValueIndex k = 0; k < catalog.experiment(a).num_values(); ++k)
      states.push_back(state_vector(qm.model_, qm.w_, a, k));
    qm.observables_.push_back(epiq::observable(qm.model_, states));
    qm.states_.push_back(std::move(states));
  }
  return qm;
}

GcsSet enumerate_gcs(const QuantumModel& qm, const AmplitudeVector& seed) {
  if (seed.tag() != BasisTag::common) throw BasisMismatch("GCS seed must be in the common basis");
  const double tol = qm.tolerances().structural;
  GcsSet out;
  for (auto g : qm.W().domain) {
    CVector v = apply_phase_convention(qm.W().at(g) * seed.coords());
    bool seen = false;
    for (const auto& existing : out.vectors)
      if (equal_up_to_phase(existing.coords(), v, tol)) {
        seen = true;
        break;
      }
    if (!seen) {
      out.vectors.emplace_back(BasisTag::common, std::move(v));
      out.elements.push_back(g);
    }
  }
  for (ExperimentIndex a = 0; a < qm.catalog().size(); ++a)
    for (const auto& s : qm.states(a)) {
      bool found = false;
      for (const auto& v : out.vectors)
        if (equal_up_to_phase(v.coords(), s.vector.coords(), tol)) {
          found = true;
          break;
        }
      if (!found) out.missing.emplace_back(a, s.value_index);
    }
  out.contains_all_states = out.missing.empty();
  return out;
}

} // namespace epiq
