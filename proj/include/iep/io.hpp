#pragma once

#include "iep/interp.hpp"
#include "iep/kripke.hpp"
#include "iep/qmodel.hpp"
#include "iep/semantics.hpp"
#include "iep/temporal.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace iep
{

using json = nlohmann::json;

constexpr int schema_version = 1;

// Reads a JSON document and checks its schema field; throws input_error.
json read_json_file( const std::string& path );
void check_schema( const json& j );

json signature_to_json( const signature& s );
signature signature_from_json( const json& j );

// Components carry shape, m, k, tail_reflexive, atoms and optional names;
// the root is a point name as accepted by parse_point.
json model_to_json( const quasi_model& m );
quasi_model model_from_json( const json& j );

// A frame document lists components without atoms. Model documents are
// accepted too.
json frame_to_json( const quasi_frame& f );
quasi_frame frame_from_json( const json& j );

json finite_model_to_json( const finite_model& m );

// {"axioms":[{"clusters":[{"reflexive":b,"size":n}],"closed_domain":[i]}]}
json axioms_to_json( const std::vector< canonical_axiom >& axioms );
std::vector< canonical_axiom > axioms_from_json( const json& j );

// Certificates record the formulas and logic they were produced for, the
// models, the segmentation and the check transcript.
json witness_to_json( const witness_pair& w, formula f1, formula f2, const std::string& logic_name,
                      const std::vector< std::string >& transcript = {} );
witness_pair witness_from_json( const json& j );

json temporal_witness_to_json( const temporal_witness& w, formula f1, formula f2, temporal_logic t,
                               const std::vector< std::string >& transcript = {} );
temporal_witness temporal_witness_from_json( const json& j );

json report_to_json( const check_report& r );

} // namespace iep
