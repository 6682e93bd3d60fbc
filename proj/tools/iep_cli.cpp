#include "iep/error.hpp"
#include "iep/formula.hpp"
#include "iep/interp.hpp"
#include "iep/io.hpp"
#include "iep/semantics.hpp"
#include "iep/temporal.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace iep;

namespace
{

constexpr int exit_definitive = 0;
constexpr int exit_input = 1;
constexpr int exit_unknown = 2;

struct options
{
    bool as_json = false;
    std::string logic_name = "K4.3";
    std::string axioms;
    std::string formula, phi1, phi2;
    std::string model, model2, point, frame, witness, out, sigma;
    int max_size = 24;
    int max_depth = 4;
    int cand_size = 5;
    int window = 3;
    int threads = 1;
    long long budget = 200000;
    std::string mode = "sound";
    bool logic_given = false;
};

// A path to a formula file, or the formula text itself.
formula read_formula( const std::string& arg, const char* flag )
{
    if ( arg.empty() )
        throw input_error( std::string( "missing " ) + flag );
    std::error_code ec;
    if ( std::filesystem::is_regular_file( arg, ec ) )
        return parse_file( arg );
    return parse( arg );
}

logic resolve_logic( const options& o )
{
    if ( o.axioms.empty() )
        return builtin_logic( o.logic_name );
    json j = read_json_file( o.axioms );
    std::string name = j.value( "name", o.logic_name == "K4.3" ? std::string( "custom" ) : o.logic_name );
    return unimodal_logic( name, axioms_from_json( j ) );
}

signature parse_sigma( const std::string& s )
{
    signature out;
    std::stringstream ss( s );
    std::string item;
    while ( std::getline( ss, item, ',' ) )
        if ( !item.empty() )
            out.insert( item );
    return out;
}

signature model_atoms( const quasi_model& m )
{
    signature s;
    for ( const auto& c : m.comps )
        for ( const auto& a : c.atoms )
            s.insert( a.begin(), a.end() );
    return s;
}

void write_file( const std::string& path, const json& j )
{
    std::ofstream f( path );
    if ( !f )
        throw input_error( "cannot write " + path );
    f << j.dump( 2 ) << "\n";
}

int emit( const options& o, const json& j, const std::string& text, int code )
{
    if ( o.as_json )
        std::cout << j.dump() << "\n";
    else
        std::cout << text << "\n";
    return code;
}

std::string joined( const std::vector< std::string >& lines )
{
    std::string s;
    for ( const auto& l : lines )
        s += "\n  " + l;
    return s;
}

int cmd_parse( const options& o )
{
    formula f = read_formula( o.formula, "--formula" );
    json j{ { "formula", render( f ) },
            { "size", formula_size( f ) },
            { "depth", modal_depth( f ) },
            { "temporal", f.is_temporal() },
            { "signature", signature_to_json( signature_of( f ) ) } };
    return emit( o, j, render( f ), exit_definitive );
}

int cmd_mc( const options& o )
{
    if ( o.model.empty() )
        throw input_error( "missing --model" );
    quasi_model m = model_from_json( read_json_file( o.model ) );
    formula f = read_formula( o.formula, "--formula" );
    point_ref x = o.point.empty() ? m.root : parse_point( m, o.point );
    bool v = m.temporal ? temporal_mc_quasi( m, x, f ) : mc_quasi( m, x, f );
    json j{ { "point", point_name( m, x ) }, { "value", v } };
    return emit( o, j, v ? "true" : "false", exit_definitive );
}

formula validity_target( const options& o )
{
    if ( !o.formula.empty() )
        return read_formula( o.formula, "--formula" );
    return implies( read_formula( o.phi1, "--phi1" ), read_formula( o.phi2, "--phi2" ) );
}

validity_result run_validity( formula g, const logic& L )
{
    if ( L.temporal )
        return decide_temporal_validity( g, L.tag );
    return decide_validity( g, L );
}

const char* status_name( validity_status s )
{
    switch ( s ) {
    case validity_status::valid: return "valid";
    case validity_status::countermodel: return "countermodel";
    default: return "unknown";
    }
}

int cmd_valid( const options& o, bool sat )
{
    logic L = resolve_logic( o );
    formula g = validity_target( o );
    validity_result r = run_validity( sat ? neg( g ) : g, L );
    std::string verdict;
    if ( sat )
        verdict = r.status == validity_status::valid          ? "unsat"
                  : r.status == validity_status::countermodel ? "sat"
                                                              : "unknown";
    else
        verdict = status_name( r.status );
    json j{ { "verdict", verdict }, { "logic", L.name } };
    if ( !r.note.empty() )
        j[ "note" ] = r.note;
    std::string text = verdict;
    if ( r.countermodel ) {
        j[ sat ? "model" : "countermodel" ] = model_to_json( *r.countermodel );
        text += "\n" + model_to_json( *r.countermodel ).dump();
    }
    if ( !o.out.empty() && r.countermodel )
        write_file( o.out, model_to_json( *r.countermodel ) );
    return emit( o, j, text, r.status == validity_status::unknown ? exit_unknown : exit_definitive );
}

int cmd_bisim( const options& o )
{
    if ( !o.witness.empty() ) {
        json c = read_json_file( o.witness );
        witness_pair w = witness_from_json( c );
        signature sigma = o.sigma.empty()
                              ? sig_intersect( signature_of( read_formula( o.phi1.empty() ? c.value( "phi1", "" ) : o.phi1, "--phi1" ) ),
                                               signature_of( read_formula( o.phi2.empty() ? c.value( "phi2", "" ) : o.phi2, "--phi2" ) ) )
                              : parse_sigma( o.sigma );
        bool v = certify_bisimilar( w, sigma );
        return emit( o, json{ { "certified", v } }, v ? "true" : "false", exit_definitive );
    }
    if ( o.model.empty() || o.model2.empty() )
        throw input_error( "bisim needs --model and --model2, or --witness" );
    quasi_model m1 = model_from_json( read_json_file( o.model ) );
    quasi_model m2 = model_from_json( read_json_file( o.model2 ) );
    if ( m1.temporal != m2.temporal )
        throw input_error( "models differ in the temporal flag" );
    signature sigma = o.sigma.empty() ? sig_union( model_atoms( m1 ), model_atoms( m2 ) ) : parse_sigma( o.sigma );
    auto t1 = truncate( m1, o.window ), t2 = truncate( m2, o.window );
    auto rel = largest_sigma_bisim( t1.model, t2.model, sigma, m1.temporal );
    bool v = rel.count( { t1.index_of( m1.root ), t2.index_of( m2.root ) } ) > 0;
    json pairs = json::array();
    for ( const auto& [ a, b ] : rel )
        pairs.push_back( { t1.model.names[ a ], t2.model.names[ b ] } );
    json j{ { "roots_related", v }, { "window", o.window }, { "pairs", pairs } };
    return emit( o, j, v ? "true" : "false", exit_definitive );
}

int cmd_frame_check( const options& o )
{
    if ( o.frame.empty() )
        throw input_error( "missing --frame" );
    logic L = resolve_logic( o );
    quasi_frame f = frame_from_json( read_json_file( o.frame ) );
    bool v;
    if ( L.temporal ) {
        f.temporal = true;
        v = temporal_validates( f, L.tag );
    } else {
        if ( f.temporal )
            throw input_error( "temporal frame checked against a unimodal logic" );
        v = validates_logic( f, L );
    }
    return emit( o, json{ { "logic", L.name }, { "value", v } }, v ? "true" : "false", exit_definitive );
}

iep_options iep_opts( const options& o )
{
    iep_options opt;
    if ( o.mode == "complete" )
        opt.mode = search_mode::complete;
    else if ( o.mode != "sound" )
        throw input_error( "--mode must be sound or complete" );
    opt.search.max_size = o.max_size;
    opt.search.budget = o.budget;
    opt.enumerate.max_depth = o.max_depth;
    opt.enumerate.max_size = o.cand_size;
    opt.enumerate.threads = o.threads;
    return opt;
}

int verdict_code( verdict_kind k ) { return k == verdict_kind::unknown ? exit_unknown : exit_definitive; }

int cmd_iep( const options& o )
{
    logic L = resolve_logic( o );
    formula f1 = read_formula( o.phi1, "--phi1" ), f2 = read_formula( o.phi2, "--phi2" );
    iep_options opt = iep_opts( o );
    json j{ { "logic", L.name } };
    std::string text;
    verdict_kind kind;
    if ( L.temporal ) {
        temporal_limits lim;
        lim.budget = o.budget;
        bool dense = L.tag == temporal_logic::lin || L.tag == temporal_logic::lin_q || L.tag == temporal_logic::lin_r;
        temporal_verdict v = dense ? decide_iep_dense( f1, f2, L.tag, lim, opt.enumerate )
                                   : decide_iep_discrete( f1, f2, L.tag, lim, opt.enumerate );
        kind = v.kind;
        j[ "transcript" ] = v.transcript;
        if ( v.witness ) {
            auto rep = verify_temporal_witness( *v.witness, f1, f2, L.tag );
            j[ "certificate" ] = temporal_witness_to_json( *v.witness, f1, f2, L.tag, rep.transcript );
        }
        if ( v.interpolant )
            j[ "interpolant" ] = render( *v.interpolant );
        if ( v.countermodel )
            j[ "countermodel" ] = model_to_json( *v.countermodel );
        text = joined( v.transcript );
    } else {
        iep_verdict v = decide_iep( f1, f2, L, opt );
        kind = v.kind;
        j[ "transcript" ] = v.transcript;
        j[ "complete_search" ] = v.complete_search;
        if ( v.witness ) {
            auto rep = verify_witness( *v.witness, f1, f2, L, compute_bounds( L, f1, f2 ) );
            j[ "certificate" ] = witness_to_json( *v.witness, f1, f2, L.name, rep.transcript );
        }
        if ( v.interpolant )
            j[ "interpolant" ] = render( *v.interpolant );
        if ( v.countermodel )
            j[ "countermodel" ] = model_to_json( *v.countermodel );
        text = joined( v.transcript );
    }
    j[ "verdict" ] = verdict_name( kind );
    if ( !o.out.empty() && j.contains( "certificate" ) )
        write_file( o.out, j[ "certificate" ] );
    std::string head = verdict_name( kind );
    if ( j.contains( "interpolant" ) )
        head += " " + j[ "interpolant" ].get< std::string >();
    return emit( o, j, head + text, verdict_code( kind ) );
}

int cmd_interp_search( const options& o )
{
    logic L = resolve_logic( o );
    formula f1 = read_formula( o.phi1, "--phi1" ), f2 = read_formula( o.phi2, "--phi2" );
    enumerate_limits lim;
    lim.max_size = o.cand_size;
    lim.max_depth = o.max_depth;
    lim.threads = o.threads;
    auto c = enumerate_interpolant( f1, f2, L, lim );
    json j{ { "logic", L.name }, { "found", c.has_value() } };
    if ( c )
        j[ "interpolant" ] = render( *c );
    return emit( o, j, c ? render( *c ) : "not found", c ? exit_definitive : exit_unknown );
}

int cmd_verify( const options& o )
{
    if ( o.witness.empty() )
        throw input_error( "missing --witness" );
    json c = read_json_file( o.witness );
    options oo = o;
    if ( c.contains( "logic" ) && !o.logic_given && o.axioms.empty() )
        oo.logic_name = c[ "logic" ].get< std::string >();
    formula f1 = read_formula( o.phi1.empty() ? c.value( "phi1", "" ) : o.phi1, "--phi1" );
    formula f2 = read_formula( o.phi2.empty() ? c.value( "phi2", "" ) : o.phi2, "--phi2" );
    logic L = resolve_logic( oo );
    check_report rep;
    if ( c.value( "kind", "witness" ) == "temporal_witness" ) {
        if ( !L.temporal )
            throw input_error( "temporal certificate checked against a unimodal logic" );
        rep = verify_temporal_witness( temporal_witness_from_json( c ), f1, f2, L.tag );
    } else {
        if ( L.temporal )
            throw input_error( "unimodal certificate checked against a temporal logic" );
        rep = verify_witness( witness_from_json( c ), f1, f2, L, compute_bounds( L, f1, f2 ) );
    }
    json j = report_to_json( rep );
    j[ "logic" ] = L.name;
    return emit( o, j, std::string( rep.ok ? "pass" : "fail: " + rep.failed ) + joined( rep.transcript ),
                 exit_definitive );
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Interpolant existence for linear modal and temporal logics" };
    app.require_subcommand( 1 );
    options o;
    app.add_flag( "--json", o.as_json, "Machine-readable output" );

    std::vector< CLI::Option* > logic_flags;
    auto logic_opts = [ & ]( CLI::App* c ) {
        logic_flags.push_back(
            c->add_option( "--logic", o.logic_name, "K4.3, GL.3, LogN, Dense, Lin, LinQ, LinR, LinFin, LinZ" ) );
        c->add_option( "--axioms", o.axioms, "Canonical axioms JSON added to K4.3" );
    };
    auto pair_opts = [ & ]( CLI::App* c ) {
        c->add_option( "--phi1", o.phi1, "First formula (file or text)" );
        c->add_option( "--phi2", o.phi2, "Second formula (file or text)" );
    };
    auto json_flag = [ & ]( CLI::App* c ) { c->add_flag( "--json", o.as_json, "Machine-readable output" ); };

    auto* parse_cmd = app.add_subcommand( "parse", "Parse and render a formula" );
    parse_cmd->add_option( "--formula", o.formula )->required();

    auto* mc_cmd = app.add_subcommand( "mc", "Model check a formula at a point" );
    mc_cmd->add_option( "--model", o.model )->required();
    mc_cmd->add_option( "--formula", o.formula )->required();
    mc_cmd->add_option( "--point", o.point, "Point name; defaults to the root" );

    auto* valid_cmd = app.add_subcommand( "valid", "Decide validity, or phi1 -> phi2" );
    auto* sat_cmd = app.add_subcommand( "sat", "Decide satisfiability" );
    for ( auto* c : { valid_cmd, sat_cmd } ) {
        logic_opts( c );
        pair_opts( c );
        c->add_option( "--formula", o.formula );
        c->add_option( "--out", o.out, "Write the model found" );
    }

    auto* bisim_cmd = app.add_subcommand( "bisim", "Largest sigma-bisimulation on truncations, or certify a witness" );
    bisim_cmd->add_option( "--model", o.model );
    bisim_cmd->add_option( "--model2", o.model2 );
    bisim_cmd->add_option( "--sigma", o.sigma, "Comma-separated variables" );
    bisim_cmd->add_option( "--window", o.window, "Tail points kept per tail" );
    bisim_cmd->add_option( "--witness", o.witness, "Witness certificate" );
    pair_opts( bisim_cmd );

    auto* frame_cmd = app.add_subcommand( "frame-check", "Check a frame against a logic" );
    logic_opts( frame_cmd );
    frame_cmd->add_option( "--frame", o.frame )->required();

    auto* iep_cmd = app.add_subcommand( "iep", "Decide interpolant existence" );
    logic_opts( iep_cmd );
    pair_opts( iep_cmd );
    iep_cmd->add_option( "--max-size", o.max_size, "Witness model size cap" );
    iep_cmd->add_option( "--max-depth", o.max_depth, "Interpolant candidate depth" );
    iep_cmd->add_option( "--cand-size", o.cand_size, "Interpolant candidate size" );
    iep_cmd->add_option( "--mode", o.mode, "sound or complete" );
    iep_cmd->add_option( "--budget", o.budget, "Search budget" );
    iep_cmd->add_option( "--threads", o.threads, "Enumerator workers" );
    iep_cmd->add_option( "--out", o.out, "Write the certificate" );

    auto* interp_cmd = app.add_subcommand( "interp-search", "Enumerate interpolant candidates" );
    logic_opts( interp_cmd );
    pair_opts( interp_cmd );
    interp_cmd->add_option( "--max-size", o.cand_size, "Candidate size" );
    interp_cmd->add_option( "--max-depth", o.max_depth, "Candidate depth" );
    interp_cmd->add_option( "--threads", o.threads, "Workers" );

    auto* verify_cmd = app.add_subcommand( "verify", "Replay the checks on a certificate" );
    logic_opts( verify_cmd );
    pair_opts( verify_cmd );
    verify_cmd->add_option( "--witness", o.witness )->required();

    for ( auto* c : app.get_subcommands( {} ) )
        json_flag( c );

    try {
        app.parse( argc, argv );
    } catch ( const CLI::Success& e ) {
        return app.exit( e );
    } catch ( const CLI::ParseError& e ) {
        app.exit( e );
        return exit_input;
    }
    for ( auto* f : logic_flags )
        o.logic_given = o.logic_given || f->count() > 0;

    try {
        if ( *parse_cmd )
            return cmd_parse( o );
        if ( *mc_cmd )
            return cmd_mc( o );
        if ( *valid_cmd )
            return cmd_valid( o, false );
        if ( *sat_cmd )
            return cmd_valid( o, true );
        if ( *bisim_cmd )
            return cmd_bisim( o );
        if ( *frame_cmd )
            return cmd_frame_check( o );
        if ( *iep_cmd )
            return cmd_iep( o );
        if ( *interp_cmd )
            return cmd_interp_search( o );
        if ( *verify_cmd )
            return cmd_verify( o );
    } catch ( const input_error& e ) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
