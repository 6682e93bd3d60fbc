#pragma once

#include "iep/interp.hpp"
#include "iep/kripke.hpp"
#include "iep/qmodel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iep
{

// Frame validity for the discrete logics on quasi-finite temporal frames.
// Lin holds everywhere; LinQ and LinR are decided on tadpole-free frames.
bool temporal_validates( const quasi_frame& f, temporal_logic t );

// The temporal frame as a finite frame; throws when it has tadpoles.
finite_frame finite_temporal_frame( const quasi_frame& f );

// Finite models for Lin, LinQ, LinR and LinFin; for LinZ, models of shape
// C(k,*) < chain < C(*,k') with k, k' at most `lasso_width`.
validity_result decide_temporal_validity( formula g, temporal_logic t, long long max_states = 400000,
                                          int lasso_width = 2 );

// Identity blocks relate equal points; in a sandwich T_s < M < T_e the
// ends agree pointwise and every point from the cluster of T_s to the
// cluster of T_e is related to every sigma-equal point of that region.
enum class block_kind { identity, sandwich };

const char* block_kind_name( block_kind k );
block_kind block_kind_from_name( const std::string& s );

struct temporal_block
{
    block_kind kind = block_kind::identity;
    int left_begin = 0, left_end = 0;
    int right_begin = 0, right_end = 0;
};

struct temporal_witness
{
    quasi_model m1, m2;
    std::vector< temporal_block > blocks;
};

// Empty when the block pair matches, else the reasons.
std::vector< std::string > temporal_block_mismatch( const std::vector< simple_model >& n1,
                                                    const std::vector< simple_model >& n2, const signature& sigma,
                                                    block_kind kind );

check_report verify_temporal_witness( const temporal_witness& w, formula f1, formula f2, temporal_logic t );

struct temporal_limits
{
    int max_blocks = 3;
    int max_k = 2;
    int max_interior = 3;
    long long budget = 200000;
};

struct temporal_verdict
{
    verdict_kind kind = verdict_kind::unknown;
    std::optional< temporal_witness > witness;
    std::optional< formula > interpolant;
    std::optional< quasi_model > countermodel;
    std::vector< std::string > transcript;
};

struct temporal_search_result
{
    search_status status = search_status::exhausted;
    std::optional< temporal_witness > witness;
    long long expanded = 0;
};

temporal_search_result search_temporal_witness( formula f1, formula f2, temporal_logic t, const temporal_limits& lim );

temporal_verdict decide_iep_dense( formula f1, formula f2, temporal_logic t, const temporal_limits& lim,
                                   const enumerate_limits& en );
temporal_verdict decide_iep_discrete( formula f1, formula f2, temporal_logic t, const temporal_limits& lim,
                                      const enumerate_limits& en );

} // namespace iep
