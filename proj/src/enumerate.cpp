#include "iep/error.hpp"
#include "iep/interp.hpp"
#include "iep/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace iep
{

std::vector< formula > sigma_formulas( const signature& sigma, bool temporal, int max_size, int max_depth )
{
    // by_size[s] holds the candidates with s nodes, in generation order.
    std::vector< std::vector< formula > > by_size( std::max( max_size, 0 ) + 1 );
    std::vector< formula > out;
    std::set< formula > seen;
    auto emit = [ & ]( int s, formula f ) {
        if ( f.depth() > max_depth || !seen.insert( f ).second )
            return;
        by_size[ s ].push_back( f );
        out.push_back( f );
    };
    if ( max_size < 1 )
        return out;
    emit( 1, top() );
    emit( 1, bot() );
    for ( const auto& p : sigma )
        emit( 1, var( p ) );
    for ( int s = 2; s <= max_size; ++s ) {
        for ( formula a : by_size[ s - 1 ] ) {
            if ( a.kind() != op::neg && a.kind() != op::top && a.kind() != op::bot )
                emit( s, neg( a ) );
            if ( temporal ) {
                emit( s, dia_f( a ) );
                emit( s, dia_p( a ) );
            } else {
                emit( s, dia( a ) );
            }
        }
        for ( int i = 1; 2 * i <= s - 1; ++i ) {
            const auto &xs = by_size[ i ], &ys = by_size[ s - 1 - i ];
            for ( std::size_t x = 0; x < xs.size(); ++x )
                for ( std::size_t y = ( 2 * i == s - 1 ) ? x + 1 : 0; y < ys.size(); ++y ) {
                    formula a = xs[ x ], b = ys[ y ];
                    if ( a.kind() == op::top || a.kind() == op::bot || b.kind() == op::top || b.kind() == op::bot )
                        continue;
                    emit( s, conj( a, b ) );
                }
        }
    }
    return out;
}

namespace
{

// Countermodels found so far, used to reject candidates without a search.
class refuter_bank
{
    std::mutex _mu;
    std::vector< quasi_model > _models;

public:
    bool refutes( formula g )
    {
        std::vector< quasi_model > copy;
        {
            std::lock_guard< std::mutex > lock( _mu );
            copy = _models;
        }
        for ( const auto& m : copy )
            if ( !mc_quasi( m, m.root, g ) )
                return true;
        return false;
    }

    void add( quasi_model m )
    {
        std::lock_guard< std::mutex > lock( _mu );
        _models.push_back( std::move( m ) );
    }
};

enum class check { holds, fails, unknown };

check valid_in( formula g, const logic& L, long long states, refuter_bank& bank )
{
    if ( bank.refutes( g ) )
        return check::fails;
    auto r = decide_validity( g, L, states );
    if ( r.status == validity_status::countermodel ) {
        bank.add( *r.countermodel );
        return check::fails;
    }
    return r.status == validity_status::valid ? check::holds : check::unknown;
}

bool interpolates( formula f1, formula f2, formula c, const logic& L, long long states, refuter_bank& bank )
{
    return valid_in( implies( f1, c ), L, states, bank ) == check::holds &&
           valid_in( implies( c, f2 ), L, states, bank ) == check::holds;
}

} // namespace

std::optional< formula > enumerate_interpolant( formula f1, formula f2, const logic& L, const enumerate_limits& lim )
{
    signature sigma = sig_intersect( signature_of( f1 ), signature_of( f2 ) );
    auto cands = sigma_formulas( sigma, L.temporal, lim.max_size, lim.max_depth );
    refuter_bank bank;
    const std::size_t n = cands.size();
    const int threads = std::max( 1, lim.threads );
    if ( threads == 1 ) {
        for ( formula c : cands )
            if ( interpolates( f1, f2, c, L, lim.validity_states, bank ) )
                return c;
        return std::nullopt;
    }
    // Workers claim indices in order; the smallest successful index wins.
    std::atomic< std::size_t > next{ 0 }, best{ n };
    std::vector< std::thread > pool;
    std::mutex err_mu;
    std::exception_ptr err;
    for ( int t = 0; t < threads; ++t )
        pool.emplace_back( [ & ] {
            try {
                for ( std::size_t i = next++; i < n && i < best.load(); i = next++ )
                    if ( interpolates( f1, f2, cands[ i ], L, lim.validity_states, bank ) ) {
                        std::size_t cur = best.load();
                        while ( i < cur && !best.compare_exchange_weak( cur, i ) ) {
                        }
                    }
            } catch ( ... ) {
                std::lock_guard< std::mutex > lock( err_mu );
                err = std::current_exception();
            }
        } );
    for ( auto& th : pool )
        th.join();
    if ( err )
        std::rethrow_exception( err );
    if ( best.load() < n )
        return cands[ best.load() ];
    return std::nullopt;
}

const char* verdict_name( verdict_kind v )
{
    switch ( v ) {
    case verdict_kind::no_interpolant: return "no_interpolant";
    case verdict_kind::interpolant_exists: return "interpolant_exists";
    case verdict_kind::implication_invalid: return "implication_invalid";
    default: return "unknown";
    }
}

iep_verdict decide_iep( formula f1, formula f2, const logic& L, const iep_options& opt )
{
    if ( L.temporal )
        throw input_error( "temporal logics are decided by the temporal procedures" );
    iep_verdict v;
    auto& log = v.transcript;

    auto imp = decide_validity( implies( f1, f2 ), L, opt.enumerate.validity_states );
    if ( imp.status == validity_status::countermodel ) {
        v.kind = verdict_kind::implication_invalid;
        v.countermodel = imp.countermodel;
        log.push_back( "implication: countermodel found" );
        return v;
    }
    log.push_back( std::string( "implication: " ) +
                   ( imp.status == validity_status::valid ? "valid" : "not refuted (" + imp.note + ")" ) );

    bounds bd = compute_bounds( L, f1, f2 );
    search_limits lim = opt.search;
    if ( opt.mode == search_mode::complete ) {
        auto clamp = []( long long x ) { return static_cast< int >( std::min< long long >( x, 1 << 20 ) ); };
        lim.max_size = clamp( L.cofinal() ? bd.kb : bd.size_max );
        lim.max_k = clamp( bd.kb );
        lim.max_prefix = clamp( bd.pL );
        lim.max_segments = clamp( bd.N_max );
    }
    auto s = search_witness( f1, f2, L, bd, lim );
    log.push_back( "witness search: " + std::to_string( s.expanded ) + " moves, " +
                   ( s.status == search_status::found       ? "found"
                     : s.status == search_status::exhausted ? "exhausted"
                                                            : "budget exceeded" ) );
    if ( s.witness ) {
        auto rep = verify_witness( *s.witness, f1, f2, L, bd );
        for ( const auto& line : rep.transcript )
            log.push_back( "verify " + line );
        if ( !rep.ok )
            throw std::logic_error( "witness search returned a witness that fails verification" );
        v.kind = verdict_kind::no_interpolant;
        v.witness = s.witness;
        return v;
    }
    // Exhausting the full bounds rules out every witness the search grammar
    // can express.
    if ( opt.mode == search_mode::complete && s.status == search_status::exhausted &&
         imp.status == validity_status::valid ) {
        v.kind = verdict_kind::interpolant_exists;
        v.complete_search = true;
        log.push_back( "complete search exhausted at the theoretical bounds" );
    }
    auto c = enumerate_interpolant( f1, f2, L, opt.enumerate );
    if ( c ) {
        v.kind = verdict_kind::interpolant_exists;
        v.interpolant = c;
        log.push_back( "enumerator: interpolant " + render( *c ) );
    } else {
        log.push_back( "enumerator: no interpolant up to size " + std::to_string( opt.enumerate.max_size ) +
                       ", depth " + std::to_string( opt.enumerate.max_depth ) );
    }
    return v;
}

} // namespace iep
