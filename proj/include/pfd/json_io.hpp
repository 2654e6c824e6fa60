#pragma once

#include "pfd/cubical_homology.hpp"
#include "pfd/face_lifting.hpp"
#include "pfd/implicit_solver.hpp"
#include "pfd/tilt_engine.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pfd::io {

using Json = nlohmann::ordered_json;

// All parse failures raise Error(Parse).
Json parse_text(const std::string& text);
Json read_file(const std::string& path);

Json to_json(const Rational& r);
Rational rational_from(const Json& j);

Json field_params_json(const FieldParams& f);
FieldParams field_params_from(const Json& j);

Json to_json(const FieldElement& x);
FieldElement field_element_from(const Json& j);

Json to_json(const TateSeries& f);
TateSeries tate_series_from(const Json& j);
// Parses into an existing ring (params must match exactly).
TateSeries tate_series_from(const Json& j, const ParamsPtr& ring);

Json to_json(const PolySystem& s);
PolySystem system_from(const Json& j);

Json to_json(const TiltElement& t);
TiltElement tilt_element_from(const Json& j);

Json to_json(const Matrix& m);
Matrix matrix_from(const Json& j, std::size_t rows, std::size_t cols);

Json to_json(const CubicalModule& m);
CubicalModule module_from(const Json& j);

Json to_json(const FaceMap& f);
FaceMap face_map_from(const Json& j);

struct Constraints {
    int n = 0;
    std::vector<FaceMap> maps;
};
Json to_json(const Constraints& c);
Constraints constraints_from(const Json& j);

struct TupleJob {
    std::vector<TateSeries> elements;
    Rational epsilon{0};
    std::vector<std::string> cube_vars;
    std::optional<std::vector<Coincidence>> coincidences;  // nullopt = "auto"
};
Json to_json(const TupleJob& t);
TupleJob tuple_job_from(const Json& j);

struct LiftJob {
    TateSeries g;
    std::vector<std::string> cube_vars;
    std::vector<std::pair<FaceMap, TateSeries>> faces;
    int D = 1;
    std::optional<int> level;
};
Json to_json(const LiftJob& l);
LiftJob lift_job_from(const Json& j);

struct HomotopyJob {
    PolySystem system;
    std::vector<MapData> maps;
    std::vector<std::string> cube_vars;
    std::optional<Rational> epsilon;
};
Json to_json(const HomotopyJob& h);
HomotopyJob homotopy_job_from(const Json& j);

Json to_json(const Check& c);

}  // namespace pfd::io
